#pragma once

#include <Eigen/Core>

#include "fastlim/errors.hpp"
#include "fastlim/grid.hpp"

namespace fastlim {

/// Tridiagonal matrix stored by its three diagonals. lower[i] sits in row
/// i+1, upper[i] in row i.
template <typename Scalar>
class TridiagonalOperator {
 public:
  TridiagonalOperator(Vector<Scalar> lower, Vector<Scalar> diag, Vector<Scalar> upper)
      : lower_(std::move(lower)), diag_(std::move(diag)), upper_(std::move(upper)) {
    const Eigen::Index n = diag_.size();
    if (n < 1 || lower_.size() != n - 1 || upper_.size() != n - 1) {
      throw DomainError("tridiagonal: diagonal lengths must be n-1, n, n-1");
    }
  }

  Eigen::Index size() const { return diag_.size(); }
  const Vector<Scalar>& lower() const { return lower_; }
  const Vector<Scalar>& diag() const { return diag_; }
  const Vector<Scalar>& upper() const { return upper_; }

  /// |diag_i| >= |lower_{i-1}| + |upper_i| in every row.
  bool diagonally_dominant() const {
    using std::abs;
    const Eigen::Index n = size();
    for (Eigen::Index i = 0; i < n; ++i) {
      Scalar off(0);
      if (i > 0) off += abs(lower_[i - 1]);
      if (i < n - 1) off += abs(upper_[i]);
      if (abs(diag_[i]) < off) return false;
    }
    return true;
  }

  template <typename Derived>
  Vector<Scalar> apply(const Eigen::MatrixBase<Derived>& v) const {
    const Eigen::Index n = size();
    if (v.size() != n) throw DomainError("tridiagonal apply: length mismatch");
    Vector<Scalar> out = diag_.cwiseProduct(v);
    if (n > 1) {
      out.head(n - 1) += upper_.cwiseProduct(v.tail(n - 1));
      out.tail(n - 1) += lower_.cwiseProduct(v.head(n - 1));
    }
    return out;
  }

  /// Thomas sweep without pivoting. Stable for the diagonally dominant and
  /// M-matrix systems assembled in this library.
  template <typename Derived>
  Vector<Scalar> solve(const Eigen::MatrixBase<Derived>& rhs) const {
    const Eigen::Index n = size();
    if (rhs.size() != n) throw DomainError("tridiagonal solve: length mismatch");
    Vector<Scalar> c_star(n);
    Vector<Scalar> x(n);
    Scalar pivot = diag_[0];
    if (pivot == Scalar(0)) throw DomainError("tridiagonal solve: zero pivot");
    c_star[0] = n > 1 ? upper_[0] / pivot : Scalar(0);
    x[0] = rhs[0] / pivot;
    for (Eigen::Index i = 1; i < n; ++i) {
      pivot = diag_[i] - lower_[i - 1] * c_star[i - 1];
      if (pivot == Scalar(0)) throw DomainError("tridiagonal solve: zero pivot");
      c_star[i] = i < n - 1 ? upper_[i] / pivot : Scalar(0);
      x[i] = (rhs[i] - lower_[i - 1] * x[i - 1]) / pivot;
    }
    for (Eigen::Index i = n - 2; i >= 0; --i) x[i] -= c_star[i] * x[i + 1];
    return x;
  }

 private:
  Vector<Scalar> lower_;
  Vector<Scalar> diag_;
  Vector<Scalar> upper_;
};

}  // namespace fastlim
