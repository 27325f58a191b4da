#include <cmath>

#include "doctest.h"
#include "fastlim/detail/march.hpp"
#include "fastlim/diagnostics.hpp"
#include "fastlim/fast_solver.hpp"
#include "fastlim/operators.hpp"
#include "ode_oracle.hpp"
#include "support.hpp"

using namespace fastlim;
using fastlim::testing::Gen;
using fastlim::testing::max_abs;

namespace {

const TransitionPair kPower = PowerPair{1.0, -1.0};

FastInitial constant_initial(Eigen::Index n, double r1, double r2, double s) {
  return {VectorXd::Constant(n, r1), VectorXd::Constant(n, r2), VectorXd::Constant(n, s)};
}

FastInitial standard_initial(const Grid1D& grid) {
  FastInitial ic{VectorXd(grid.size()), VectorXd(grid.size()), VectorXd(grid.size())};
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double x = grid.node(i);
    ic.r1[i] = 1.0 + std::sin(10.0 * x);
    ic.r2[i] = 1.0 + std::cos(20.0 * x);
    ic.s[i] = 1.0 + std::cos(x);
  }
  return ic;
}

ModelParams inert_params() {
  ModelParams p;
  p.gamma1 = p.gamma2 = p.eta1 = p.eta2 = p.mu = p.rho = 0.0;
  return p;
}

}  // namespace

TEST_CASE("zero state stays zero") {
  const Grid1D grid(1.0, 16);
  const FastState zero{0.0, VectorXd::Zero(16), VectorXd::Zero(16), VectorXd::Zero(16)};
  for (double dt : {1e-4, 1e-2, 1.0}) {
    const auto out = step_fast(zero, ModelParams{}, kPower, dt, grid);
    CHECK(max_abs(out.r1) == 0.0);
    CHECK(max_abs(out.r2) == 0.0);
    CHECK(max_abs(out.s) == 0.0);
    CHECK(out.t == dt);
  }
}

TEST_CASE("constant on-manifold state is a fixed point without reactions") {
  const Grid1D grid(1.0, 16);
  // s = 1: f = 1, g = 1/2, so r2 = 2 r1 is on the manifold.
  const FastState st{0.0, VectorXd::Constant(16, 0.7), VectorXd::Constant(16, 1.4),
                     VectorXd::Constant(16, 1.0)};
  ModelParams p = inert_params();
  p.epsilon = 1e-3;
  const auto out = step_fast(st, p, kPower, 1e-2, grid);
  CHECK(max_abs(out.r1 - st.r1) <= 1e-15);
  CHECK(max_abs(out.r2 - st.r2) <= 1e-15);
  CHECK(max_abs(out.s - st.s) <= 1e-15);
}

TEST_CASE("homogeneous run tracks an RK4 reference") {
  // First-order splitting: the step needed for 1e-4 agreement is well below
  // the sweep's dt (at dt = 1e-3 the gap is a few 1e-3).
  const Grid1D grid(1.0, 5);
  ModelParams p;
  p.epsilon = 0.1;
  const double dt = 1e-5;
  const auto times = uniform_times(1.0, 20);
  const auto traj = run_fast(p, kPower, grid, constant_initial(5, 1.0, 1.0, 1.0), 1.0, dt, times);
  double worst = 0.0;
  int k = 0;
  fastlim::testing::rk4_visit<3>({1.0, 1.0, 1.0}, fastlim::testing::fast_power_rhs(p), 1e-6, 0.05,
                                 20, [&](double t, const std::array<double, 3>& y) {
                                   const auto& f = traj.frames[k++];
                                   CHECK(f.t == doctest::Approx(t));
                                   worst = std::max({worst, max_abs(f.r1.array() - y[0]),
                                                     max_abs(f.r2.array() - y[1]),
                                                     max_abs(f.s.array() - y[2])});
                                 });
  CHECK(worst < 1e-4);

  // the same comparison at the sweep step is first-order accurate only
  const auto coarse = run_fast(p, kPower, grid, constant_initial(5, 1.0, 1.0, 1.0), 1.0, 1e-3, times);
  const double gap = std::abs(coarse.final_frame().s[0] - traj.final_frame().s[0]);
  CHECK(gap > 1e-4);
  CHECK(gap < 1e-2);
}

TEST_CASE("run_fast trajectory layout") {
  const Grid1D grid(1.0, 9);
  const ModelParams p;
  const auto ic = constant_initial(9, 1.0, 1.0, 1.0);

  const auto single = run_fast(p, kPower, grid, ic, 0.0, 1e-3, {});
  CHECK(single.times.size() == 1);
  CHECK(single.frames.size() == 1);
  CHECK(single.frames[0].r1 == ic.r1);

  const auto traj = run_fast(p, kPower, grid, ic, 0.3, 0.04, {0.1, 0.25});
  REQUIRE(traj.times.size() == 4);
  CHECK(traj.times[0] == 0.0);
  CHECK(traj.times[1] == 0.1);
  CHECK(traj.times[2] == 0.25);
  CHECK(traj.times[3] == 0.3);
  for (std::size_t k = 0; k < traj.times.size(); ++k) CHECK(traj.frames[k].t == traj.times[k]);

  CHECK_THROWS_AS(run_fast(p, kPower, grid, ic, 1.0, 1e-2, {0.5, 0.2}), DomainError);
  CHECK_THROWS_AS(run_fast(p, kPower, grid, ic, 1.0, 1e-2, {1.5}), DomainError);
  CHECK_THROWS_AS(run_fast(p, kPower, grid, ic, 1.0, 0.0, {}), DomainError);
  auto negative = ic;
  negative.s[2] = -0.1;
  CHECK_THROWS_AS(run_fast(p, kPower, grid, negative, 1.0, 1e-2, {}), DomainError);
  auto short_ic = ic;
  short_ic.r2 = VectorXd::Ones(4);
  CHECK_THROWS_AS(run_fast(p, kPower, grid, short_ic, 1.0, 1e-2, {}), DomainError);
  ModelParams bad = p;
  bad.d_R2 = 1.0;
  CHECK_THROWS_AS(run_fast(bad, kPower, grid, ic, 1.0, 1e-2, {}), DomainError);
}

TEST_CASE("observer sees every base step") {
  const Grid1D grid(1.0, 9);
  std::vector<double> seen;
  run_fast(ModelParams{}, kPower, grid, constant_initial(9, 1.0, 1.0, 1.0), 0.1, 0.01, {0.05},
           [&](const FastState& st) { seen.push_back(st.t); });
  REQUIRE(seen.size() == 11);
  CHECK(seen.front() == 0.0);
  CHECK(seen[5] == 0.05);
  CHECK(seen.back() == 0.1);
}

TEST_CASE("run_fast is deterministic and fingerprinted") {
  const Grid1D grid(1.0, 32);
  ModelParams p;
  p.epsilon = 0.05;
  const auto ic = standard_initial(grid);
  const auto a = run_fast(p, kPower, grid, ic, 0.2, 1e-3, uniform_times(0.2, 4));
  const auto b = run_fast(p, kPower, grid, ic, 0.2, 1e-3, uniform_times(0.2, 4));
  CHECK(a.final_frame().r1 == b.final_frame().r1);
  CHECK(a.fingerprint == b.fingerprint);
  CHECK(a.fingerprint.size() == 16);
  p.epsilon = 0.06;
  CHECK(run_fast(p, kPower, grid, ic, 0.0, 1e-3, {}).fingerprint != a.fingerprint);
}

TEST_CASE("constant initial data stay spatially constant") {
  const Grid1D grid(1.0, 64);
  ModelParams p;
  p.epsilon = 0.01;
  const auto traj = run_fast(p, kPower, grid, constant_initial(64, 0.4, 1.3, 2.0), 1.0, 1e-3,
                             uniform_times(1.0, 10));
  for (const auto& f : traj.frames) {
    CHECK(f.r1.maxCoeff() - f.r1.minCoeff() <= 1e-10);
    CHECK(f.r2.maxCoeff() - f.r2.minCoeff() <= 1e-10);
    CHECK(f.s.maxCoeff() - f.s.minCoeff() <= 1e-10);
  }
}

TEST_CASE("toxicity floor after one time unit") {
  const Grid1D grid(1.0, 256);
  ModelParams p;
  p.epsilon = 1e-2;
  const auto traj = run_fast(p, kPower, grid, standard_initial(grid), 1.0, 1e-3, uniform_times(1.0, 20));
  const double floor = std::exp(-0.2) * (1.0 + std::cos(1.0));
  CHECK(floor == doctest::Approx(1.2610928668511740).epsilon(1e-15));
  CHECK(traj.final_frame().s.minCoeff() >= floor - 1e-6);
  for (const auto& f : traj.frames) {
    CHECK(f.s.minCoeff() >= std::exp(-p.rho * f.t) * (1.0 + std::cos(1.0)) - 1e-6);
    CHECK(f.r1.minCoeff() >= -1e-12);
    CHECK(f.r2.minCoeff() >= -1e-12);
  }
}

TEST_CASE("property: exchange conserves total roots exactly") {
  Gen gen(21);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = gen.integer(3, 64);
    const Grid1D grid(gen.uniform(0.5, 2.0), n);
    ModelParams p;
    p.gamma1 = p.gamma2 = p.eta1 = p.eta2 = 0.0;
    p.epsilon = gen.log_uniform(1e-8, 1.0);
    const FastState st{0.0, gen.field(n, 0.0, 3.0), gen.field(n, 0.0, 3.0), gen.field(n, 0.0, 3.0)};
    const double dt = gen.log_uniform(1e-5, 1e-1);
    const auto mid = react_and_exchange(st, p, gen.any_pair(), dt);
    const auto out = step_fast(st, p, kPower, dt, grid);
    const double before = quad_trapezoid(st.total_roots(), grid);
    CHECK(std::abs(quad_trapezoid(mid.total_roots(), grid) - before) <= 1e-10 * before);
    CHECK(std::abs(quad_trapezoid(out.total_roots(), grid) - before) <= 1e-10 * before);
  }
}

TEST_CASE("property: tiny epsilon never stiffens the step") {
  const Grid1D grid(1.0, 64);
  const auto ic = standard_initial(grid);
  for (double eps : {1e-4, 1e-6, 1e-8, 1e-10}) {
    ModelParams p;
    p.epsilon = eps;
    int calls = 0;
    const auto traj =
        run_fast(p, kPower, grid, ic, 0.1, 1e-3, {}, [&](const FastState&) { ++calls; });
    CHECK(calls == 101);
    CHECK(traj.final_frame().r1.minCoeff() >= -1e-12);
  }
}

TEST_CASE("manifold residual at a fixed time shrinks with epsilon") {
  const Grid1D grid(1.0, 64);
  const auto ic = standard_initial(grid);
  double previous = std::numeric_limits<double>::infinity();
  for (double eps : {1.0, 0.1, 0.01, 0.001}) {
    ModelParams p;
    p.epsilon = eps;
    const auto traj = run_fast(p, kPower, grid, ic, 0.5, 1e-4, {});
    const double r = manifold_residual(traj.final_frame(), kPower, grid, 2.0);
    CHECK(r <= 1.05 * previous);
    previous = r;
  }
}

TEST_CASE("rejected steps are retried as half steps") {
  struct Scalar1 {
    double t = 0.0;
    double v = 0.0;
  };
  int calls = 0;
  auto picky = [&](const Scalar1& s, double h) {
    ++calls;
    if (h > 0.03) throw StepRejected("too big");
    return Scalar1{s.t + h, s.v + h};
  };
  const auto out = detail::advance(Scalar1{}, 0.1, picky, 0);
  CHECK(out.v == doctest::Approx(0.1));
  CHECK(calls == 1 + 2 + 4);

  auto never = [](const Scalar1&, double) -> Scalar1 { throw StepRejected("never"); };
  CHECK_THROWS_AS(detail::advance(Scalar1{}, 0.1, never, 0), StiffFailure);
}
