#include "fastlim/limit_solver.hpp"

#include "fastlim/detail/march.hpp"
#include "fastlim/operators.hpp"

namespace fastlim {

namespace {

void check_accepted(const VectorXd& u, const char* field) {
  if (!u.allFinite() || u.minCoeff() < kRejectThreshold) {
    throw StepRejected(std::string("limit step produced invalid ") + field);
  }
}

// g must stay strictly positive on the operating range of a limit run.
void require_positive_g(const VectorXd& s, const TransitionPair& pair) {
  if (const auto* sat = std::get_if<SaturationPair>(&pair)) {
    if (s.size() > 0 && s.maxCoeff() >= sat->S_hat) {
      throw DomainError("saturation pair has g = 0 for S >= S_hat; not valid for limit runs");
    }
  }
}

}  // namespace

VectorXd effective_diffusion_field(const VectorXd& s, const ModelParams& params,
                                   const TransitionPair& pair) {
  VectorXd a(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) a[i] = effective_diffusion(s[i], params, pair);
  return a;
}

LimitState step_limit(const LimitState& state, const ModelParams& params,
                      const TransitionPair& pair, double dt, const Grid1D& grid) {
  if (!(dt > 0.0)) throw DomainError("step_limit: dt must be positive");
  require_positive_g(state.s, pair);
  const Eigen::Index n = grid.size();
  VectorXd a(n);
  VectorXd h(n);
  VectorXd tox_source(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = state.r[i];
    const double s = state.s[i];
    a[i] = effective_diffusion(s, params, pair);
    h[i] = reaction_h(r, s, params, pair);
    tox_source[i] = limit_toxicity_source(r, s, params, pair);
  }
  LimitState out{state.t + dt, solve_variable_product_diffusion(state.r, a, dt, grid, h),
                 solve_backward_euler_diffusion(state.s, params.d_S, dt, grid, tox_source,
                                                params.rho)};
  check_accepted(out.r, "R");
  check_accepted(out.s, "S");
  return out;
}

LimitTrajectory run_limit(const ModelParams& params, const TransitionPair& pair,
                          const Grid1D& grid, const LimitInitial& initial, double T, double dt,
                          const std::vector<double>& snapshot_times) {
  return run_limit(params, pair, grid, initial, T, dt, snapshot_times, LimitObserver{});
}

LimitTrajectory run_limit(const ModelParams& params, const TransitionPair& pair,
                          const Grid1D& grid, const LimitInitial& initial, double T, double dt,
                          const std::vector<double>& snapshot_times, const LimitObserver& observe) {
  params.validate();
  validate_pair(pair);
  for (const VectorXd* u : {&initial.r, &initial.s}) {
    if (u->size() != grid.size()) throw DomainError("run_limit: initial data length mismatch");
    if (!u->allFinite() || u->minCoeff() < 0.0) {
      throw DomainError("run_limit: initial data must be finite and nonnegative");
    }
  }
  auto step = [&](const LimitState& st, double h) { return step_limit(st, params, pair, h, grid); };
  auto watch = [&](const LimitState& st) {
    if (observe) observe(st);
  };
  auto traj = detail::march(grid, LimitState{0.0, initial.r, initial.s}, T, dt, snapshot_times,
                            step, watch);
  // epsilon does not enter the limit system; keep it out of the fingerprint.
  ModelParams keyed = params;
  keyed.epsilon = 0.0;
  traj.fingerprint = run_fingerprint(keyed, pair, grid, dt, "limit-semi-implicit");
  return traj;
}

std::pair<VectorXd, VectorXd> reconstruct_components(const LimitState& state,
                                                     const TransitionPair& pair) {
  const Eigen::Index n = state.r.size();
  if (state.s.size() != n) throw DomainError("reconstruct_components: length mismatch");
  VectorXd r1(n);
  VectorXd r2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [xi1, xi2] = xi_split(state.r[i], state.s[i], pair);
    r1[i] = xi1;
    r2[i] = xi2;
  }
  return {std::move(r1), std::move(r2)};
}

}  // namespace fastlim
