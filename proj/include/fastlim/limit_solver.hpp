#pragma once

// Semi-implicit integrator for the limiting cross-diffusion system
//   R_t = Delta(a(S) R) + h(R, S),
//   S_t = d_S Delta S + mu (eta1 xi1 + eta2 xi2) - rho S.
// a(S) is frozen at the pre-step S, reaction sources are explicit, the
// toxicity sink is implicit.

#include <functional>
#include <utility>
#include <vector>

#include "fastlim/grid.hpp"
#include "fastlim/model.hpp"
#include "fastlim/state.hpp"

namespace fastlim {

struct LimitInitial {
  VectorXd r;
  VectorXd s;
};

/// Nodal effective diffusion a(s_i).
VectorXd effective_diffusion_field(const VectorXd& s, const ModelParams& params,
                                   const TransitionPair& pair);

LimitState step_limit(const LimitState& state, const ModelParams& params,
                      const TransitionPair& pair, double dt, const Grid1D& grid);

LimitTrajectory run_limit(const ModelParams& params, const TransitionPair& pair,
                          const Grid1D& grid, const LimitInitial& initial, double T, double dt,
                          const std::vector<double>& snapshot_times);

/// Called with the initial state and after every base step.
using LimitObserver = std::function<void(const LimitState&)>;

LimitTrajectory run_limit(const ModelParams& params, const TransitionPair& pair,
                          const Grid1D& grid, const LimitInitial& initial, double T, double dt,
                          const std::vector<double>& snapshot_times, const LimitObserver& observe);

/// Component densities (r1, r2) = (xi1(R, S), xi2(R, S)) at every node.
std::pair<VectorXd, VectorXd> reconstruct_components(const LimitState& state,
                                                     const TransitionPair& pair);

}  // namespace fastlim
