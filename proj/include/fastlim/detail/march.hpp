#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fastlim/errors.hpp"
#include "fastlim/state.hpp"

namespace fastlim::detail {

/// Snapshot grid with 0 and T present, validated against [0, T].
inline std::vector<double> normalize_snapshots(std::vector<double> times, double T) {
  if (!(T >= 0.0) || !std::isfinite(T)) throw DomainError("final time must be finite and >= 0");
  if (!std::is_sorted(times.begin(), times.end())) {
    throw DomainError("snapshot times must be sorted");
  }
  for (double t : times) {
    if (!(t >= 0.0 && t <= T)) throw DomainError("snapshot times must lie in [0, T]");
  }
  times.insert(times.begin(), 0.0);
  times.push_back(T);
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

/// Advances by h, retrying a rejected step as two half steps.
template <typename State, typename Step>
State advance(const State& state, double h, const Step& step, int depth) {
  try {
    return step(state, h);
  } catch (const StepRejected& e) {
    if (depth >= kMaxHalvings) {
      throw StiffFailure("step rejected after " + std::to_string(depth) +
                         " halvings: " + e.what());
    }
    const State half = advance(state, 0.5 * h, step, depth + 1);
    return advance(half, 0.5 * h, step, depth + 1);
  }
}

struct NoObserver {
  template <typename State>
  void operator()(const State&) const {}
};

/// Fixed-step march recording a frame at every snapshot time. Each interval
/// between snapshots is split into ceil(len / dt) equal steps. `observe`
/// sees the initial state and the state after every base step.
template <typename State, typename Step, typename Observer = NoObserver>
Trajectory<State> march(const Grid1D& grid, State initial, double T, double dt,
                        const std::vector<double>& snapshot_times, const Step& step,
                        const Observer& observe = {}) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
  Trajectory<State> traj{grid, normalize_snapshots(snapshot_times, T), {}, {}};
  traj.frames.reserve(traj.times.size());
  initial.t = 0.0;
  observe(initial);
  traj.frames.push_back(initial);
  State current = std::move(initial);
  for (std::size_t k = 1; k < traj.times.size(); ++k) {
    const double t0 = traj.times[k - 1];
    const double t1 = traj.times[k];
    const double span = t1 - t0;
    const auto steps = static_cast<long>(std::ceil(span / dt * (1.0 - 1e-12)));
    const double h = span / static_cast<double>(std::max(steps, 1L));
    for (long j = 0; j < steps; ++j) {
      current = advance(current, h, step, 0);
      current.t = j + 1 == steps ? t1 : t0 + static_cast<double>(j + 1) * h;
      observe(current);
    }
    current.t = t1;
    traj.frames.push_back(current);
  }
  return traj;
}

}  // namespace fastlim::detail
