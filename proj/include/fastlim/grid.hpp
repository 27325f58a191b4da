#pragma once

#include <Eigen/Core>
#include <cstddef>

#include "fastlim/errors.hpp"

namespace fastlim {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using VectorXd = Vector<double>;

/// Uniform vertex-centered grid on [0, L]: nodes 0, dx, ..., L.
class Grid1D {
 public:
  Grid1D(double length, Eigen::Index n) : length_(length), n_(n) {
    if (n < 3) throw DomainError("grid needs at least 3 nodes");
    if (!(length > 0.0)) throw DomainError("grid length must be positive");
    dx_ = length / static_cast<double>(n - 1);
  }

  double length() const { return length_; }
  Eigen::Index size() const { return n_; }
  double dx() const { return dx_; }

  /// Position of node i; the last node is exactly L.
  double node(Eigen::Index i) const {
    return i == n_ - 1 ? length_ : static_cast<double>(i) * dx_;
  }

  VectorXd nodes() const {
    VectorXd x(n_);
    for (Eigen::Index i = 0; i < n_; ++i) x[i] = node(i);
    return x;
  }

  bool operator==(const Grid1D& other) const {
    return length_ == other.length_ && n_ == other.n_;
  }

 private:
  double length_;
  Eigen::Index n_;
  double dx_;
};

}  // namespace fastlim
