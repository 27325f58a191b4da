#pragma once

// Lie-split IMEX integrator for the epsilon-system. Per step:
//   1. explicit logistic growth / mortality of r1, r2 and toxicity source,
//   2. pointwise implicit exchange (I + dt/eps M(s)) (r1, r2) = (r1*, r2*)
//      with M = [[f, -g], [-f, g]] frozen at the pre-step s,
//   3. backward-Euler diffusion of each field, -rho s taken implicitly.
// Step size never couples to epsilon.

#include <functional>
#include <vector>

#include "fastlim/grid.hpp"
#include "fastlim/model.hpp"
#include "fastlim/state.hpp"

namespace fastlim {

struct FastInitial {
  VectorXd r1;
  VectorXd r2;
  VectorXd s;
};

/// One splitting step. Throws StepRejected if any entry ends below
/// kRejectThreshold or is non-finite.
FastState step_fast(const FastState& state, const ModelParams& params, const TransitionPair& pair,
                    double dt, const Grid1D& grid);

/// Sub-steps 1 and 2 only (no diffusion); exposed for conservation tests.
FastState react_and_exchange(const FastState& state, const ModelParams& params,
                             const TransitionPair& pair, double dt);

/// Integrates to T with steps of at most dt, landing exactly on every
/// snapshot time. A rejected step is retried as two half steps, up to
/// kMaxHalvings levels deep, after which StiffFailure is thrown.
FastTrajectory run_fast(const ModelParams& params, const TransitionPair& pair, const Grid1D& grid,
                        const FastInitial& initial, double T, double dt,
                        const std::vector<double>& snapshot_times);

/// Called with the initial state and after every base step.
using FastObserver = std::function<void(const FastState&)>;

FastTrajectory run_fast(const ModelParams& params, const TransitionPair& pair, const Grid1D& grid,
                        const FastInitial& initial, double T, double dt,
                        const std::vector<double>& snapshot_times, const FastObserver& observe);

}  // namespace fastlim
