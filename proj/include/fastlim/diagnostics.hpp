#pragma once

// Norms, energies, residuals and rate fits over states and trajectories.

#include <limits>
#include <string>
#include <vector>

#include "fastlim/grid.hpp"
#include "fastlim/model.hpp"
#include "fastlim/state.hpp"

namespace fastlim {

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// A spatial norm per snapshot time.
struct NormSeries {
  std::vector<double> times;
  std::vector<double> values;
  std::string label;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points_used = 0;
};

/// (trapezoid of |u|^p)^(1/p); p == kInfNorm gives max |u_i|. Throws for p < 1.
double lp_space_norm(const VectorXd& u, const Grid1D& grid, double p);

/// Space-time L^p norm from per-snapshot spatial L^p norms: trapezoid in
/// time of values^p, then the p-th root. A single snapshot spans zero time
/// measure and yields 0.
double lp_spacetime_norm(const NormSeries& spatial_norms, double p);

/// Integral of f(s)^(p-1) r1^p + g(s)^(p-1) r2^p.
double energy_Ep(const FastState& state, const TransitionPair& pair, const Grid1D& grid, double p);

/// Integral of Q_p = (A^(p-1) - B^(p-1)) (A - B), A = f r1, B = g r2.
/// Requires p >= 2.
double qp_residual_norm(const FastState& state, const TransitionPair& pair, const Grid1D& grid,
                        double p);

/// Nodal f(s) r1 - g(s) r2.
VectorXd manifold_defect(const FastState& state, const TransitionPair& pair);

/// ||f(s) r1 - g(s) r2||_{L^p}.
double manifold_residual(const FastState& state, const TransitionPair& pair, const Grid1D& grid,
                         double p);

/// Spatial manifold residual at every frame.
NormSeries manifold_residual_series(const FastTrajectory& traj, const TransitionPair& pair,
                                    double p);

/// (zeta ||U||^2 + ||grad U||^2)^(1/2) with U = (Delta_h - zeta)^{-1} u.
double negative_norm(const VectorXd& u, double zeta, const Grid1D& grid);

struct TrajectoryError {
  double err_R = 0.0;
  double err_S = 0.0;
  NormSeries series_R;
  NormSeries series_S;
};

/// Per-snapshot L^p distances of (r1 + r2) - R and s - S and their
/// space-time aggregates. Grids and snapshot times must agree.
TrajectoryError trajectory_error(const FastTrajectory& fast, const LimitTrajectory& limit,
                                 double p);

/// Least squares through (log10 eps, log10 err) after discarding the
/// `drop_preasymptotic` largest epsilons.
RateFit fit_rate(const std::vector<double>& epsilons, const std::vector<double>& errors,
                 int drop_preasymptotic);

}  // namespace fastlim
