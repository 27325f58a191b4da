#pragma once

// Experiment orchestration: epsilon sweeps, ODE-oracle validation,
// refinement and stability studies, and CSV/JSON emission.

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "fastlim/config.hpp"
#include "fastlim/diagnostics.hpp"
#include "fastlim/fast_solver.hpp"
#include "fastlim/limit_solver.hpp"

namespace fastlim {

/// Solver failure inside a sweep, tagged with the epsilon that failed.
class SweepFailure : public std::runtime_error {
 public:
  SweepFailure(double epsilon, const std::string& what)
      : std::runtime_error(what), epsilon_(epsilon) {}
  double epsilon() const { return epsilon_; }

 private:
  double epsilon_;
};

/// (1 + sin(10x), 1 + cos(20x), 1 + cos(x)) at the grid nodes.
FastInitial make_initial(const Grid1D& grid);

struct SweepRecord {
  double epsilon = 0.0;
  double err_R_L2 = 0.0;
  double err_S_L2 = 0.0;
  double manifold_residual_L2 = 0.0;
  double negative_norm_final = 0.0;
  double wall_time_seconds = 0.0;
};

/// Pointwise bounds observed along one run.
struct RunBounds {
  double min_field = 0.0;  // min over all fields, nodes and snapshots
  /// min over snapshots of (min_x S(t) - e^{-rho t} min_x S0).
  double toxicity_floor_margin = 0.0;
  double max_total_roots = 0.0;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::vector<TrajectoryError> evolution;  // one per epsilon
  std::vector<RunBounds> fast_bounds;      // one per epsilon
  RunBounds limit_bounds;
  double limit_initial_max_R = 0.0;
  // NaN slopes and points_used == 0 when the sweep is too short to fit.
  RateFit rate_R;
  RateFit rate_S;
  RateFit rate_manifold;
};

RunBounds fast_run_bounds(const FastTrajectory& traj, double rho);
RunBounds limit_run_bounds(const LimitTrajectory& traj, double rho);

/// One shared limit run plus one fast run per epsilon (run concurrently),
/// with errors, residuals and rate fits.
SweepResult run_sweep(const ExperimentConfig& config);

inline constexpr double kRateSlopeLow = 0.35;
inline constexpr double kRateSlopeHigh = 0.65;
inline constexpr double kRateMinRSquared = 0.95;
inline constexpr double kMonotoneSlack = 0.05;
inline constexpr double kToxicityFloorTolerance = 1e-6;
inline constexpr double kPositivityTolerance = -1e-12;
inline constexpr double kCeilingFactor = 1.01;

struct SweepCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Rate bands, monotone decay, toxicity floor, positivity and the limit
/// run's L-infinity ceiling, evaluated on a finished sweep.
std::vector<SweepCheck> check_sweep(const SweepResult& result, const ExperimentConfig& config);

/// Writes sweep.csv, evolution_eps_<k>.csv and rates.json into `dir`.
void write_sweep_outputs(const SweepResult& result, const std::filesystem::path& dir);

std::string sweep_csv(const std::vector<SweepRecord>& records);
std::string evolution_csv(const TrajectoryError& error);
std::string rates_json(const SweepResult& result);

struct OracleCase {
  std::string name;
  double max_discrepancy = 0.0;
  bool pass = false;
};

struct OracleReport {
  std::vector<OracleCase> cases;
  bool pass() const;
};

/// RK4 trajectory of the spatially homogeneous epsilon-system, sampled at
/// `times`. Each sample holds (r1, r2, s).
std::vector<std::array<double, 3>> rk4_fast_ode(const ModelParams& params,
                                                const TransitionPair& pair,
                                                std::array<double, 3> initial,
                                                const std::vector<double>& times, double dt);

/// RK4 trajectory of R' = h(R, S), S' = mu (eta1 xi1 + eta2 xi2) - rho S.
std::vector<std::array<double, 2>> rk4_limit_ode(const ModelParams& params,
                                                 const TransitionPair& pair,
                                                 std::array<double, 2> initial,
                                                 const std::vector<double>& times, double dt);

/// Constant initial data (1, 1, 1): both PDE solvers against the RK4 ODE
/// reductions for epsilon in {1, 0.1} and the limit system.
OracleReport run_homogeneous_oracle(const ExperimentConfig& config);

/// Oracle with explicit parameters and constant initial state.
OracleCase homogeneous_fast_case(const ExperimentConfig& config, const ModelParams& params,
                                 std::array<double, 3> initial);
OracleCase homogeneous_limit_case(const ExperimentConfig& config, const ModelParams& params,
                                  std::array<double, 2> initial);

struct ConvergenceSeries {
  std::string label;
  std::vector<double> steps;        // dx or dt per level, coarse to fine
  std::vector<double> differences;  // L2 distance between consecutive levels
  std::vector<double> orders;       // one per consecutive pair of differences
  bool applicable = true;           // false when every difference is at roundoff
  double order() const;             // finest estimate, NaN if not applicable
};

struct RefinementReport {
  ConvergenceSeries fast_space;
  ConvergenceSeries fast_time;
  ConvergenceSeries limit_space;
  ConvergenceSeries limit_time;
  bool pass() const;
};

/// Self-convergence at epsilon = refine.epsilon: n in {64,128,256,512} with
/// dt fixed, and dt in {4,2,1,0.5} x 1e-3 with n fixed. Coarse-grid
/// solutions are compared on the coarsest nodes via cubic interpolation.
RefinementReport run_refinement_study(const ExperimentConfig& config);
RefinementReport run_refinement_study(const ExperimentConfig& config, const FastInitial& initial);

/// Fourth-order Lagrange interpolation of nodal data at x.
double interpolate_cubic(const VectorXd& u, const Grid1D& grid, double x);

struct StabilityPoint {
  double delta = 0.0;
  double ratio = 0.0;          // ||(dR, dS)||_{L2(Omega_T)} / delta
  double max_ratio_S = 0.0;    // max_t ||dS(t)||_{L2(Omega)} / ||delta||_{L2(Omega)}
  double max_ratio_R = 0.0;
};

struct StabilityReport {
  std::vector<StabilityPoint> points;
  double variation = 0.0;  // max ratio / min ratio
  bool pass() const { return variation < 2.0; }
};

/// Limit runs from (R0, S0) and (R0 + d, S0 + d) for d = delta, delta/10,
/// delta/100. Requires delta in (0, 0.1].
StabilityReport run_stability_probe(const ExperimentConfig& config, double delta);
StabilityReport run_stability_probe(const ExperimentConfig& config, double delta,
                                    const LimitInitial& initial);

/// 17 significant digits, as written to every CSV.
std::string format_double(double value);

}  // namespace fastlim
