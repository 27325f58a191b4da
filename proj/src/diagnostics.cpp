#include "fastlim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fastlim/operators.hpp"

namespace fastlim {

double lp_space_norm(const VectorXd& u, const Grid1D& grid, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_space_norm: p must be >= 1");
  detail::require_length(u, grid, "lp_space_norm");
  if (std::isinf(p)) return u.cwiseAbs().maxCoeff();
  if (p == 2.0) return std::sqrt(quad_trapezoid<double>(u.cwiseAbs2(), grid));
  const VectorXd powered = u.cwiseAbs().array().pow(p).matrix();
  return std::pow(quad_trapezoid<double>(powered, grid), 1.0 / p);
}

double lp_spacetime_norm(const NormSeries& spatial_norms, double p) {
  const auto& t = spatial_norms.times;
  const auto& v = spatial_norms.values;
  if (t.size() != v.size() || t.empty()) {
    throw DomainError("lp_spacetime_norm: times and values must be nonempty and equal length");
  }
  if (!(p >= 1.0) || std::isinf(p)) throw DomainError("lp_spacetime_norm: p must be finite, >= 1");
  double integral = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double dt = t[k] - t[k - 1];
    if (!(dt > 0.0)) throw DomainError("lp_spacetime_norm: times must be strictly increasing");
    integral += 0.5 * dt * (std::pow(v[k - 1], p) + std::pow(v[k], p));
  }
  return std::pow(integral, 1.0 / p);
}

double energy_Ep(const FastState& state, const TransitionPair& pair, const Grid1D& grid,
                 double p) {
  if (!(p > 1.0)) throw DomainError("energy_Ep: p must be > 1");
  const Eigen::Index n = grid.size();
  VectorXd density(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto tv = eval_transition(pair, state.s[i]);
    // Roundoff-level negative densities count as zero.
    density[i] = std::pow(tv.f, p - 1.0) * std::pow(std::max(state.r1[i], 0.0), p) +
                 std::pow(tv.g, p - 1.0) * std::pow(std::max(state.r2[i], 0.0), p);
  }
  return quad_trapezoid(density, grid);
}

double qp_residual_norm(const FastState& state, const TransitionPair& pair, const Grid1D& grid,
                        double p) {
  if (!(p >= 2.0)) throw DomainError("qp_residual_norm: p must be >= 2");
  const Eigen::Index n = grid.size();
  VectorXd density(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto tv = eval_transition(pair, state.s[i]);
    const double A = tv.f * std::max(state.r1[i], 0.0);
    const double B = tv.g * std::max(state.r2[i], 0.0);
    if (p == 2.0) {
      density[i] = (A - B) * (A - B);
    } else {
      // x -> x^(p-1) is increasing, so both factors share a sign.
      density[i] = (std::pow(A, p - 1.0) - std::pow(B, p - 1.0)) * (A - B);
    }
  }
  return quad_trapezoid(density, grid);
}

VectorXd manifold_defect(const FastState& state, const TransitionPair& pair) {
  const Eigen::Index n = state.r1.size();
  VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    w[i] = fast_exchange(state.r1[i], state.r2[i], state.s[i], pair);
  }
  return w;
}

double manifold_residual(const FastState& state, const TransitionPair& pair, const Grid1D& grid,
                         double p) {
  return lp_space_norm(manifold_defect(state, pair), grid, p);
}

NormSeries manifold_residual_series(const FastTrajectory& traj, const TransitionPair& pair,
                                    double p) {
  NormSeries series{traj.times, {}, "manifold_residual"};
  series.values.reserve(traj.frames.size());
  for (const auto& frame : traj.frames) {
    series.values.push_back(manifold_residual(frame, pair, traj.grid, p));
  }
  return series;
}

double negative_norm(const VectorXd& u, double zeta, const Grid1D& grid) {
  if (!(zeta > 0.0)) throw DomainError("negative_norm: zeta must be positive");
  const VectorXd U = solve_shifted_poisson(u, zeta, grid);
  const VectorXd grad = finite_difference_gradient(U, grid);
  const double value =
      zeta * quad_trapezoid<double>(U.cwiseAbs2(), grid) + quad_trapezoid<double>(grad.cwiseAbs2(), grid);
  return std::sqrt(value);
}

TrajectoryError trajectory_error(const FastTrajectory& fast, const LimitTrajectory& limit,
                                 double p) {
  if (!(fast.grid == limit.grid)) throw DomainError("trajectory_error: grids differ");
  if (fast.times != limit.times) throw DomainError("trajectory_error: snapshot times differ");
  TrajectoryError out;
  out.series_R = {fast.times, {}, "norm_R_diff"};
  out.series_S = {fast.times, {}, "norm_S_diff"};
  for (std::size_t k = 0; k < fast.frames.size(); ++k) {
    const auto& fs = fast.frames[k];
    const auto& ls = limit.frames[k];
    out.series_R.values.push_back(lp_space_norm(fs.r1 + fs.r2 - ls.r, fast.grid, p));
    out.series_S.values.push_back(lp_space_norm(fs.s - ls.s, fast.grid, p));
  }
  out.err_R = lp_spacetime_norm(out.series_R, p);
  out.err_S = lp_spacetime_norm(out.series_S, p);
  return out;
}

RateFit fit_rate(const std::vector<double>& epsilons, const std::vector<double>& errors,
                 int drop_preasymptotic) {
  if (epsilons.size() != errors.size()) throw DomainError("fit_rate: length mismatch");
  if (drop_preasymptotic < 0) throw DomainError("fit_rate: drop count must be >= 0");
  std::vector<std::size_t> order(epsilons.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i : order) {
    if (!(epsilons[i] > 0.0) || !(errors[i] > 0.0) || !std::isfinite(errors[i])) {
      throw DomainError("fit_rate: epsilons and errors must be positive and finite");
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return epsilons[a] > epsilons[b]; });
  const auto drop = std::min<std::size_t>(static_cast<std::size_t>(drop_preasymptotic), order.size());
  const std::size_t m = order.size() - drop;
  if (m < 2) throw DomainError("fit_rate: fewer than 2 points after dropping");

  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t k = drop; k < order.size(); ++k) {
    x.push_back(std::log10(epsilons[order[k]]));
    y.push_back(std::log10(errors[order[k]]));
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(m);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_rate: epsilons must not all coincide");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double r = y[k] - (fit.intercept + fit.slope * x[k]);
    ss_res += r * r;
  }
  // A perfectly flat series is fitted exactly.
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.points_used = static_cast<int>(m);
  return fit;
}

}  // namespace fastlim
