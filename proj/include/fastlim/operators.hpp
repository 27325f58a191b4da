#pragma once

// Second-order Neumann finite differences on a vertex-centered grid.
// Boundary rows use ghost reflection (u_{-1} = u_1, u_n = u_{n-2}).

#include <Eigen/Core>
#include <cmath>

#include "fastlim/errors.hpp"
#include "fastlim/grid.hpp"
#include "fastlim/tridiagonal.hpp"

namespace fastlim {

namespace detail {

template <typename Scalar>
void require_length(const Vector<Scalar>& u, const Grid1D& grid, const char* what) {
  if (u.size() != grid.size()) throw DomainError(std::string(what) + ": length mismatch");
}

template <typename Scalar>
void require_finite(const Vector<Scalar>& u, const char* what) {
  if (!u.allFinite()) throw DomainError(std::string(what) + ": non-finite input");
}

template <typename Scalar>
Scalar inv_dx2(const Grid1D& grid) {
  const Scalar dx(grid.dx());
  return Scalar(1) / (dx * dx);
}

/// dt * d / dx^2, shared by every implicit diffusion assembly so the
/// constant- and variable-coefficient paths produce identical matrices.
template <typename Scalar>
Scalar diffusion_number(Scalar dt, Scalar d, const Grid1D& grid) {
  const Scalar dx(grid.dx());
  return dt * d / (dx * dx);
}

}  // namespace detail

/// Discrete Neumann Laplacian as a tridiagonal matrix.
template <typename Scalar = double>
TridiagonalOperator<Scalar> neumann_laplacian_matrix(const Grid1D& grid) {
  const Eigen::Index n = grid.size();
  const Scalar k = detail::inv_dx2<Scalar>(grid);
  Vector<Scalar> lower = Vector<Scalar>::Constant(n - 1, k);
  Vector<Scalar> upper = Vector<Scalar>::Constant(n - 1, k);
  Vector<Scalar> diag = Vector<Scalar>::Constant(n, Scalar(-2) * k);
  upper[0] = Scalar(2) * k;
  lower[n - 2] = Scalar(2) * k;
  return {std::move(lower), std::move(diag), std::move(upper)};
}

template <typename Scalar>
Vector<Scalar> apply_neumann_laplacian(const Vector<Scalar>& u, const Grid1D& grid) {
  detail::require_length(u, grid, "apply_neumann_laplacian");
  const Eigen::Index n = grid.size();
  const Scalar k = detail::inv_dx2<Scalar>(grid);
  Vector<Scalar> out(n);
  out[0] = Scalar(2) * (u[1] - u[0]) * k;
  out[n - 1] = Scalar(2) * (u[n - 2] - u[n - 1]) * k;
  out.segment(1, n - 2) =
      (u.head(n - 2) - Scalar(2) * u.segment(1, n - 2) + u.tail(n - 2)) * k;
  return out;
}

/// Solves (Delta_h - zeta) u = phi with Neumann boundary; zeta > 0 makes the
/// system strictly diagonally dominant.
template <typename Scalar>
Vector<Scalar> solve_shifted_poisson(const Vector<Scalar>& phi, Scalar zeta, const Grid1D& grid) {
  if (!(zeta > Scalar(0))) throw DomainError("solve_shifted_poisson: zeta must be positive");
  detail::require_length(phi, grid, "solve_shifted_poisson");
  detail::require_finite(phi, "solve_shifted_poisson");
  auto lap = neumann_laplacian_matrix<Scalar>(grid);
  Vector<Scalar> diag = (lap.diag().array() - zeta).matrix();
  return TridiagonalOperator<Scalar>(lap.lower(), std::move(diag), lap.upper()).solve(phi);
}

/// Assembles I (1 + dt decay) - dt d Delta_h.
template <typename Scalar>
TridiagonalOperator<Scalar> backward_euler_matrix(Scalar d, Scalar dt, const Grid1D& grid,
                                                  Scalar decay = Scalar(0)) {
  const Eigen::Index n = grid.size();
  const Scalar c = detail::diffusion_number(dt, d, grid);
  Vector<Scalar> lower = Vector<Scalar>::Constant(n - 1, -c);
  Vector<Scalar> upper = Vector<Scalar>::Constant(n - 1, -c);
  Vector<Scalar> diag = Vector<Scalar>::Constant(n, Scalar(1) + Scalar(2) * c + dt * decay);
  upper[0] = Scalar(-2) * c;
  lower[n - 2] = Scalar(-2) * c;
  return {std::move(lower), std::move(diag), std::move(upper)};
}

/// One backward-Euler step of u_t = d Delta u + source - decay u:
/// solves (I (1 + dt decay) - dt d Delta_h) v = u + dt source.
template <typename Scalar>
Vector<Scalar> solve_backward_euler_diffusion(const Vector<Scalar>& u, Scalar d, Scalar dt,
                                              const Grid1D& grid, const Vector<Scalar>& source,
                                              Scalar decay = Scalar(0)) {
  detail::require_length(u, grid, "solve_backward_euler_diffusion");
  detail::require_length(source, grid, "solve_backward_euler_diffusion");
  detail::require_finite(u, "solve_backward_euler_diffusion");
  detail::require_finite(source, "solve_backward_euler_diffusion");
  using std::isfinite;
  if (!(dt > Scalar(0)) || !isfinite(dt)) throw DomainError("backward Euler: dt must be positive");
  if (!(d >= Scalar(0)) || !isfinite(d)) throw DomainError("backward Euler: d must be >= 0");
  if (!(decay >= Scalar(0))) throw DomainError("backward Euler: decay must be >= 0");
  return backward_euler_matrix(d, dt, grid, decay).solve(u + dt * source);
}

/// Assembles I - dt Delta_h diag(a): the product-form cross-diffusion
/// operator, Laplacian applied to a * v.
template <typename Scalar>
TridiagonalOperator<Scalar> product_diffusion_matrix(const Vector<Scalar>& a, Scalar dt,
                                                     const Grid1D& grid) {
  const Eigen::Index n = grid.size();
  Vector<Scalar> c(n);
  for (Eigen::Index i = 0; i < n; ++i) c[i] = detail::diffusion_number(dt, a[i], grid);
  Vector<Scalar> lower = -c.head(n - 1);
  Vector<Scalar> upper = -c.tail(n - 1);
  Vector<Scalar> diag = (Scalar(1) + Scalar(2) * c.array()).matrix();
  upper[0] = Scalar(-2) * c[1];
  lower[n - 2] = Scalar(-2) * c[n - 2];
  return {std::move(lower), std::move(diag), std::move(upper)};
}

inline constexpr double kDiffusionFloor = 1e-14;

/// One step of v_t = Delta(a v) + source: solves
/// (I - dt Delta_h diag(a)) v = u + dt source. The matrix is an M-matrix
/// for a > 0, so the unpivoted sweep is stable.
template <typename Scalar>
Vector<Scalar> solve_variable_product_diffusion(const Vector<Scalar>& u, const Vector<Scalar>& a,
                                                Scalar dt, const Grid1D& grid,
                                                const Vector<Scalar>& source) {
  detail::require_length(u, grid, "solve_variable_product_diffusion");
  detail::require_length(a, grid, "solve_variable_product_diffusion");
  detail::require_length(source, grid, "solve_variable_product_diffusion");
  detail::require_finite(u, "solve_variable_product_diffusion");
  detail::require_finite(a, "solve_variable_product_diffusion");
  detail::require_finite(source, "solve_variable_product_diffusion");
  if (!(dt > Scalar(0))) throw DomainError("product diffusion: dt must be positive");
  if (!(a.minCoeff() >= Scalar(kDiffusionFloor))) {
    throw DomainError("product diffusion: coefficient below positive floor");
  }
  return product_diffusion_matrix(a, dt, grid).solve(u + dt * source);
}

/// Composite trapezoid rule over the grid nodes.
template <typename Scalar>
Scalar quad_trapezoid(const Vector<Scalar>& u, const Grid1D& grid) {
  detail::require_length(u, grid, "quad_trapezoid");
  const Eigen::Index n = grid.size();
  return Scalar(grid.dx()) * (u.sum() - Scalar(0.5) * (u[0] + u[n - 1]));
}

/// Centered differences inside, one-sided differences at the two ends.
template <typename Scalar>
Vector<Scalar> finite_difference_gradient(const Vector<Scalar>& u, const Grid1D& grid) {
  detail::require_length(u, grid, "finite_difference_gradient");
  const Eigen::Index n = grid.size();
  const Scalar dx(grid.dx());
  Vector<Scalar> g(n);
  g[0] = (u[1] - u[0]) / dx;
  g[n - 1] = (u[n - 1] - u[n - 2]) / dx;
  g.segment(1, n - 2) = (u.tail(n - 2) - u.head(n - 2)) / (Scalar(2) * dx);
  return g;
}

}  // namespace fastlim
