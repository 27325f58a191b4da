#include "fastlim/fast_solver.hpp"

#include "fastlim/detail/march.hpp"
#include "fastlim/operators.hpp"

namespace fastlim {

namespace {

void check_accepted(const VectorXd& u, const char* field) {
  if (!u.allFinite() || u.minCoeff() < kRejectThreshold) {
    throw StepRejected(std::string("fast step produced invalid ") + field);
  }
}

}  // namespace

FastState react_and_exchange(const FastState& state, const ModelParams& params,
                             const TransitionPair& pair, double dt) {
  const Eigen::Index n = state.r1.size();
  FastState out{state.t + dt, VectorXd(n), VectorXd(n), VectorXd(n)};
  const double k = dt / params.epsilon;
  const double room_hat = params.R_hat;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r1 = state.r1[i];
    const double r2 = state.r2[i];
    const double s = state.s[i];
    const double room = room_hat - (r1 + r2);
    const double a1 = r1 + dt * (params.gamma1 * r1 * room - params.eta1 * r1);
    const double a2 = r2 + dt * (params.gamma2 * r2 * room - params.eta2 * r2);
    out.s[i] = s + dt * params.mu * (params.eta1 * r1 + params.eta2 * r2);

    // (I + k M) x = a with M = [[f, -g], [-f, g]]; det = 1 + k (f + g) and
    // x1 + x2 = a1 + a2 exactly in exact arithmetic.
    const auto tv = eval_transition(pair, s);
    const double total = a1 + a2;
    const double x1 = (a1 + k * tv.g * total) / (1.0 + k * (tv.f + tv.g));
    out.r1[i] = x1;
    out.r2[i] = total - x1;
  }
  return out;
}

FastState step_fast(const FastState& state, const ModelParams& params, const TransitionPair& pair,
                    double dt, const Grid1D& grid) {
  if (!(dt > 0.0)) throw DomainError("step_fast: dt must be positive");
  if (!(params.epsilon > 0.0)) throw DomainError("step_fast: epsilon must be positive");
  const FastState mid = react_and_exchange(state, params, pair, dt);
  const VectorXd zero = VectorXd::Zero(grid.size());
  FastState out{state.t + dt,
                solve_backward_euler_diffusion(mid.r1, params.d_R1, dt, grid, zero),
                solve_backward_euler_diffusion(mid.r2, params.d_R2, dt, grid, zero),
                solve_backward_euler_diffusion(mid.s, params.d_S, dt, grid, zero, params.rho)};
  check_accepted(out.r1, "r1");
  check_accepted(out.r2, "r2");
  check_accepted(out.s, "s");
  return out;
}

FastTrajectory run_fast(const ModelParams& params, const TransitionPair& pair, const Grid1D& grid,
                        const FastInitial& initial, double T, double dt,
                        const std::vector<double>& snapshot_times) {
  return run_fast(params, pair, grid, initial, T, dt, snapshot_times, FastObserver{});
}

FastTrajectory run_fast(const ModelParams& params, const TransitionPair& pair, const Grid1D& grid,
                        const FastInitial& initial, double T, double dt,
                        const std::vector<double>& snapshot_times, const FastObserver& observe) {
  params.validate();
  validate_pair(pair);
  for (const VectorXd* u : {&initial.r1, &initial.r2, &initial.s}) {
    if (u->size() != grid.size()) throw DomainError("run_fast: initial data length mismatch");
    if (!u->allFinite() || u->minCoeff() < 0.0) {
      throw DomainError("run_fast: initial data must be finite and nonnegative");
    }
  }
  auto step = [&](const FastState& st, double h) { return step_fast(st, params, pair, h, grid); };
  auto watch = [&](const FastState& st) {
    if (observe) observe(st);
  };
  auto traj = detail::march(grid, FastState{0.0, initial.r1, initial.r2, initial.s}, T, dt,
                            snapshot_times, step, watch);
  traj.fingerprint = run_fingerprint(params, pair, grid, dt, "fast-lie-imex");
  return traj;
}

}  // namespace fastlim
