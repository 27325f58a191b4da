#pragma once

#include <string>
#include <vector>

#include "fastlim/grid.hpp"
#include "fastlim/model.hpp"

namespace fastlim {

/// A step whose output dips below this is rejected and retried with dt/2.
inline constexpr double kRejectThreshold = -1e-8;
inline constexpr int kMaxHalvings = 20;

/// Snapshot of the epsilon-system: healthy roots, exposed roots, toxicity.
struct FastState {
  double t = 0.0;
  VectorXd r1;
  VectorXd r2;
  VectorXd s;

  VectorXd total_roots() const { return r1 + r2; }
};

/// Snapshot of the limiting cross-diffusion system.
struct LimitState {
  double t = 0.0;
  VectorXd r;
  VectorXd s;
};

/// Time-ordered snapshots on a shared output grid. times.front() == 0 and
/// times.back() == T; one frame per time.
template <typename State>
struct Trajectory {
  Grid1D grid;
  std::vector<double> times;
  std::vector<State> frames;
  std::string fingerprint;

  const State& final_frame() const { return frames.back(); }
};

using FastTrajectory = Trajectory<FastState>;
using LimitTrajectory = Trajectory<LimitState>;

/// Stable 64-bit hash (FNV-1a, hex) of parameters, pair, grid and scheme
/// settings.
std::string run_fingerprint(const ModelParams& params, const TransitionPair& pair,
                            const Grid1D& grid, double dt, const std::string& scheme);

/// n + 1 uniformly spaced times from 0 to T; n == 0 gives {0}.
std::vector<double> uniform_times(double T, int intervals);

}  // namespace fastlim
