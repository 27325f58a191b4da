#pragma once

// Hand-rolled generators for property tests. Seeds are fixed so failures
// reproduce.

#include <cmath>
#include <random>

#include "fastlim/fast_solver.hpp"
#include "fastlim/grid.hpp"
#include "fastlim/model.hpp"

namespace fastlim::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  /// Log-uniform on [lo, hi], lo > 0.
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  PowerPair power() { return {uniform(0.2, 3.0), -uniform(0.2, 3.0)}; }

  /// Holling pair with a1 d1 - b1 c1 > 0 > a2 d2 - b2 c2, all coefficients >= 0.
  HollingPair holling() {
    HollingPair h;
    h.a1 = uniform(0.5, 2.0);
    h.b1 = uniform(0.0, 0.5);
    h.c1 = uniform(0.0, 1.0);
    h.d1 = uniform(0.5 + h.b1 * h.c1 / h.a1, 3.0);
    h.a2 = uniform(0.0, 0.5);
    h.b2 = uniform(0.5, 2.0);
    h.c2 = uniform(0.5, 2.0);
    h.d2 = uniform(0.1, 0.9 * h.b2 * h.c2 / std::max(h.a2, 1e-3));
    if (h.a2 * h.d2 - h.b2 * h.c2 >= 0.0) h.a2 = 0.0;
    return h;
  }

  TransitionPair any_pair() {
    switch (integer(0, 2)) {
      case 0: return power();
      case 1: return holling();
      default: return SaturationPair{uniform(0.5, 3.0)};
    }
  }

  VectorXd field(Eigen::Index n, double lo, double hi) {
    VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

inline double max_abs(const VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

/// Grid function x -> fn(x).
template <typename F>
VectorXd sample(const Grid1D& grid, F fn) {
  VectorXd v(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) v[i] = fn(grid.node(i));
  return v;
}

}  // namespace fastlim::testing
