#include "fastlim/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fastlim/operators.hpp"
#include "json.hpp"

namespace fastlim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> snapshot_grid(const ExperimentConfig& config) {
  return uniform_times(config.time.T, config.time.snapshot_count - 1);
}

Grid1D make_grid(const ExperimentConfig& config) { return {config.grid.L, config.grid.n}; }

LimitInitial limit_initial_from(const FastInitial& ic) { return {ic.r1 + ic.r2, ic.s}; }

RateFit fit_or_nan(const std::vector<double>& eps, const std::vector<double>& errors, int drop) {
  try {
    return fit_rate(eps, errors, drop);
  } catch (const DomainError&) {
    return {kNaN, kNaN, kNaN, 0};
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

struct SweepPoint {
  SweepRecord record;
  TrajectoryError error;
  RunBounds bounds;
};

SweepPoint run_sweep_point(const ExperimentConfig& config, double epsilon, const Grid1D& grid,
                           const FastInitial& ic, const LimitTrajectory& limit,
                           const std::vector<LimitState>& limit_steps,
                           const std::vector<double>& times) {
  const auto start = std::chrono::steady_clock::now();
  ModelParams params = config.params;
  params.epsilon = epsilon;
  try {
    const double p = config.diagnostics.p_norm;
    // Errors and residual change on the O(epsilon) initial layer, far below
    // the snapshot spacing, so the space-time norms are integrated on the
    // solver step grid. Both solvers march on identical step grids.
    NormSeries residual{{}, {}, "manifold_residual"};
    NormSeries dense_R{{}, {}, "R"};
    NormSeries dense_S{{}, {}, "S"};
    auto observe = [&](const FastState& st) {
      const std::size_t k = residual.times.size();
      if (k >= limit_steps.size() || std::abs(limit_steps[k].t - st.t) > 1e-9 * (1.0 + st.t)) {
        throw std::logic_error("fast and limit step grids disagree");
      }
      residual.times.push_back(st.t);
      residual.values.push_back(manifold_residual(st, config.pair, grid, p));
      dense_R.times.push_back(st.t);
      dense_R.values.push_back(lp_space_norm(st.r1 + st.r2 - limit_steps[k].r, grid, p));
      dense_S.times.push_back(st.t);
      dense_S.values.push_back(lp_space_norm(st.s - limit_steps[k].s, grid, p));
    };
    const auto fast =
        run_fast(params, config.pair, grid, ic, config.time.T, config.time.dt, times, observe);
    SweepPoint out;
    out.error = trajectory_error(fast, limit, p);
    out.bounds = fast_run_bounds(fast, params.rho);
    out.record.epsilon = epsilon;
    out.record.err_R_L2 = lp_spacetime_norm(dense_R, p);
    out.record.err_S_L2 = lp_spacetime_norm(dense_S, p);
    out.record.manifold_residual_L2 = lp_spacetime_norm(residual, p);
    const auto& ff = fast.final_frame();
    out.record.negative_norm_final =
        negative_norm(ff.r1 + ff.r2 - limit.final_frame().r, config.diagnostics.zeta, grid);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    out.record.wall_time_seconds = std::max(elapsed.count(), 1e-9);
    return out;
  } catch (const std::exception& e) {
    throw SweepFailure(epsilon, "epsilon = " + format_double(epsilon) + ": " + e.what());
  }
}

// Integrates with steps of at most dt, landing on each sample time.
template <std::size_t N, typename Rhs>
std::vector<std::array<double, N>> rk4_sampled(std::array<double, N> y, const std::vector<double>& times,
                                               double dt, const Rhs& rhs) {
  std::vector<std::array<double, N>> out;
  out.reserve(times.size());
  double t = 0.0;
  auto axpy = [](const std::array<double, N>& a, double h, const std::array<double, N>& b) {
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + h * b[i];
    return r;
  };
  for (double target : times) {
    const double span = target - t;
    const auto steps = static_cast<long>(std::ceil(span / dt * (1.0 - 1e-12)));
    if (steps > 0) {
      const double h = span / static_cast<double>(steps);
      for (long j = 0; j < steps; ++j) {
        const auto k1 = rhs(y);
        const auto k2 = rhs(axpy(y, 0.5 * h, k1));
        const auto k3 = rhs(axpy(y, 0.5 * h, k2));
        const auto k4 = rhs(axpy(y, h, k3));
        for (std::size_t i = 0; i < N; ++i) {
          y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
      }
    }
    t = target;
    out.push_back(y);
  }
  return out;
}

double l2_difference_on(const Grid1D& target, const VectorXd& a, const Grid1D& ga,
                        const VectorXd& b, const Grid1D& gb) {
  VectorXd diff(target.size());
  for (Eigen::Index i = 0; i < target.size(); ++i) {
    const double x = target.node(i);
    const double ua = ga == target ? a[i] : interpolate_cubic(a, ga, x);
    const double ub = gb == target ? b[i] : interpolate_cubic(b, gb, x);
    diff[i] = ua - ub;
  }
  return lp_space_norm(diff, target, 2.0);
}

constexpr double kRoundoffDifference = 1e-10;

void finish_series(ConvergenceSeries& series) {
  series.applicable = std::any_of(series.differences.begin(), series.differences.end(),
                                  [](double d) { return d > kRoundoffDifference; });
  series.orders.clear();
  if (!series.applicable) return;
  for (std::size_t j = 0; j + 1 < series.differences.size(); ++j) {
    const double ratio = series.differences[j] / series.differences[j + 1];
    const double refinement = series.steps[j] / series.steps[j + 1];
    series.orders.push_back(std::log(ratio) / std::log(refinement));
  }
}

bool in_band(double value, double centre, double half_width) {
  return std::isfinite(value) && std::abs(value - centre) <= half_width;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

FastInitial make_initial(const Grid1D& grid) {
  const Eigen::Index n = grid.size();
  FastInitial ic{VectorXd(n), VectorXd(n), VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = grid.node(i);
    ic.r1[i] = 1.0 + std::sin(10.0 * x);
    ic.r2[i] = 1.0 + std::cos(20.0 * x);
    ic.s[i] = 1.0 + std::cos(x);
  }
  return ic;
}

RunBounds fast_run_bounds(const FastTrajectory& traj, double rho) {
  RunBounds b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0.0};
  const double s0_min = traj.frames.front().s.minCoeff();
  for (const auto& f : traj.frames) {
    b.min_field = std::min({b.min_field, f.r1.minCoeff(), f.r2.minCoeff(), f.s.minCoeff()});
    b.toxicity_floor_margin =
        std::min(b.toxicity_floor_margin, f.s.minCoeff() - std::exp(-rho * f.t) * s0_min);
    b.max_total_roots = std::max(b.max_total_roots, (f.r1 + f.r2).maxCoeff());
  }
  return b;
}

RunBounds limit_run_bounds(const LimitTrajectory& traj, double rho) {
  RunBounds b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0.0};
  const double s0_min = traj.frames.front().s.minCoeff();
  for (const auto& f : traj.frames) {
    b.min_field = std::min({b.min_field, f.r.minCoeff(), f.s.minCoeff()});
    b.toxicity_floor_margin =
        std::min(b.toxicity_floor_margin, f.s.minCoeff() - std::exp(-rho * f.t) * s0_min);
    b.max_total_roots = std::max(b.max_total_roots, f.r.maxCoeff());
  }
  return b;
}

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  const Grid1D grid = make_grid(config);
  const auto times = snapshot_grid(config);
  const FastInitial ic = make_initial(grid);
  const LimitInitial limit_ic = limit_initial_from(ic);

  ModelParams limit_params = config.params;
  limit_params.epsilon = 1.0;  // unused by the limit system
  std::vector<LimitState> limit_steps;
  const auto limit =
      run_limit(limit_params, config.pair, grid, limit_ic, config.time.T, config.time.dt, times,
                [&](const LimitState& st) { limit_steps.push_back(st); });

  std::vector<std::future<SweepPoint>> jobs;
  jobs.reserve(config.sweep.size());
  for (double eps : config.sweep) {
    jobs.push_back(std::async(std::launch::async, [&, eps] {
      return run_sweep_point(config, eps, grid, ic, limit, limit_steps, times);
    }));
  }

  SweepResult result;
  for (auto& job : jobs) {
    auto point = job.get();
    result.records.push_back(point.record);
    result.evolution.push_back(std::move(point.error));
    result.fast_bounds.push_back(point.bounds);
  }
  result.limit_bounds = limit_run_bounds(limit, limit_params.rho);
  result.limit_initial_max_R = limit_ic.r.maxCoeff();

  std::vector<double> eps, eR, eS, eM;
  for (const auto& r : result.records) {
    eps.push_back(r.epsilon);
    eR.push_back(r.err_R_L2);
    eS.push_back(r.err_S_L2);
    eM.push_back(r.manifold_residual_L2);
  }
  const int drop = config.diagnostics.drop_preasymptotic;
  result.rate_R = fit_or_nan(eps, eR, drop);
  result.rate_S = fit_or_nan(eps, eS, drop);
  result.rate_manifold = fit_or_nan(eps, eM, drop);
  return result;
}

std::string sweep_csv(const std::vector<SweepRecord>& records) {
  std::string out =
      "epsilon,err_R_L2,err_S_L2,manifold_residual_L2,negative_norm_final,wall_time_seconds\n";
  for (const auto& r : records) {
    out += format_double(r.epsilon) + ',' + format_double(r.err_R_L2) + ',' +
           format_double(r.err_S_L2) + ',' + format_double(r.manifold_residual_L2) + ',' +
           format_double(r.negative_norm_final) + ',' + format_double(r.wall_time_seconds) + '\n';
  }
  return out;
}

std::string evolution_csv(const TrajectoryError& error) {
  std::string out = "t,norm_R_diff_L2,norm_S_diff_L2\n";
  for (std::size_t k = 0; k < error.series_R.times.size(); ++k) {
    out += format_double(error.series_R.times[k]) + ',' + format_double(error.series_R.values[k]) +
           ',' + format_double(error.series_S.values[k]) + '\n';
  }
  return out;
}

std::string rates_json(const SweepResult& result) {
  auto fit_json = [](const RateFit& f) {
    return nlohmann::ordered_json{{"slope", f.slope},
                                  {"intercept", f.intercept},
                                  {"r_squared", f.r_squared},
                                  {"points_used", f.points_used}};
  };
  nlohmann::ordered_json j;
  j["err_R"] = fit_json(result.rate_R);
  j["err_S"] = fit_json(result.rate_S);
  j["manifold"] = fit_json(result.rate_manifold);
  return j.dump(2) + "\n";
}

void write_sweep_outputs(const SweepResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "sweep.csv", sweep_csv(result.records));
  for (std::size_t k = 0; k < result.evolution.size(); ++k) {
    write_file(dir / ("evolution_eps_" + std::to_string(k) + ".csv"),
               evolution_csv(result.evolution[k]));
  }
  write_file(dir / "rates.json", rates_json(result));
}

std::vector<std::array<double, 3>> rk4_fast_ode(const ModelParams& params,
                                                const TransitionPair& pair,
                                                std::array<double, 3> initial,
                                                const std::vector<double>& times, double dt) {
  return rk4_sampled<3>(initial, times, dt, [&](const std::array<double, 3>& y) {
    const auto r = fast_reaction_rhs(y[0], y[1], std::max(y[2], 0.0), params, pair);
    return std::array<double, 3>{r.dr1, r.dr2, r.ds};
  });
}

std::vector<std::array<double, 2>> rk4_limit_ode(const ModelParams& params,
                                                 const TransitionPair& pair,
                                                 std::array<double, 2> initial,
                                                 const std::vector<double>& times, double dt) {
  return rk4_sampled<2>(initial, times, dt, [&](const std::array<double, 2>& y) {
    const double s = std::max(y[1], 0.0);
    return std::array<double, 2>{reaction_h(y[0], s, params, pair),
                                 limit_toxicity_source(y[0], s, params, pair) - params.rho * y[1]};
  });
}

OracleCase homogeneous_fast_case(const ExperimentConfig& config, const ModelParams& params,
                                 std::array<double, 3> initial) {
  const Grid1D grid = make_grid(config);
  const auto times = uniform_times(config.oracle.T, 100);
  const Eigen::Index n = grid.size();
  const FastInitial ic{VectorXd::Constant(n, initial[0]), VectorXd::Constant(n, initial[1]),
                       VectorXd::Constant(n, initial[2])};
  const auto pde = run_fast(params, config.pair, grid, ic, config.oracle.T, config.oracle.dt, times);
  const auto ode = rk4_fast_ode(params, config.pair, initial, pde.times, config.oracle.rk4_dt);
  double worst = 0.0;
  for (std::size_t k = 0; k < ode.size(); ++k) {
    const auto& f = pde.frames[k];
    worst = std::max({worst, (f.r1.array() - ode[k][0]).abs().maxCoeff(),
                      (f.r2.array() - ode[k][1]).abs().maxCoeff(),
                      (f.s.array() - ode[k][2]).abs().maxCoeff()});
  }
  return {"fast eps=" + format_double(params.epsilon), worst, worst < config.oracle.tolerance};
}

OracleCase homogeneous_limit_case(const ExperimentConfig& config, const ModelParams& params,
                                  std::array<double, 2> initial) {
  const Grid1D grid = make_grid(config);
  const auto times = uniform_times(config.oracle.T, 100);
  const Eigen::Index n = grid.size();
  const LimitInitial ic{VectorXd::Constant(n, initial[0]), VectorXd::Constant(n, initial[1])};
  const auto pde = run_limit(params, config.pair, grid, ic, config.oracle.T, config.oracle.dt, times);
  const auto ode = rk4_limit_ode(params, config.pair, initial, pde.times, config.oracle.rk4_dt);
  double worst = 0.0;
  for (std::size_t k = 0; k < ode.size(); ++k) {
    const auto& f = pde.frames[k];
    worst = std::max({worst, (f.r.array() - ode[k][0]).abs().maxCoeff(),
                      (f.s.array() - ode[k][1]).abs().maxCoeff()});
  }
  return {"limit", worst, worst < config.oracle.tolerance};
}

bool OracleReport::pass() const {
  return !cases.empty() &&
         std::all_of(cases.begin(), cases.end(), [](const OracleCase& c) { return c.pass; });
}

OracleReport run_homogeneous_oracle(const ExperimentConfig& config) {
  config.validate();
  OracleReport report;
  for (double eps : {1.0, 0.1}) {
    ModelParams params = config.params;
    params.epsilon = eps;
    report.cases.push_back(homogeneous_fast_case(config, params, {1.0, 1.0, 1.0}));
  }
  ModelParams params = config.params;
  params.epsilon = 1.0;
  report.cases.push_back(homogeneous_limit_case(config, params, {2.0, 1.0}));
  return report;
}

double interpolate_cubic(const VectorXd& u, const Grid1D& grid, double x) {
  const Eigen::Index n = grid.size();
  if (u.size() != n) throw DomainError("interpolate_cubic: length mismatch");
  const double dx = grid.dx();
  const auto cell = static_cast<Eigen::Index>(std::floor(x / dx));
  const Eigen::Index first = std::clamp<Eigen::Index>(cell - 1, 0, n - 4);
  double value = 0.0;
  for (Eigen::Index j = first; j < first + 4; ++j) {
    double weight = 1.0;
    for (Eigen::Index m = first; m < first + 4; ++m) {
      if (m != j) weight *= (x - grid.node(m)) / (grid.node(j) - grid.node(m));
    }
    value += weight * u[j];
  }
  return value;
}

double ConvergenceSeries::order() const {
  if (!applicable || orders.empty()) return kNaN;
  return orders.back();
}

bool RefinementReport::pass() const {
  return in_band(fast_space.order(), 2.0, 0.4) && in_band(limit_space.order(), 2.0, 0.4) &&
         in_band(fast_time.order(), 1.0, 0.4) && in_band(limit_time.order(), 1.0, 0.4);
}

RefinementReport run_refinement_study(const ExperimentConfig& config) {
  config.validate();
  return run_refinement_study(config, {});
}

RefinementReport run_refinement_study(const ExperimentConfig& config, const FastInitial& initial) {
  // Empty initial data means the standard initial profile on each grid.
  const bool standard_ic = initial.r1.size() == 0;
  auto initial_on = [&](const Grid1D& g) -> FastInitial {
    if (standard_ic) return make_initial(g);
    // Constant profiles: sample the first entry.
    return {VectorXd::Constant(g.size(), initial.r1[0]), VectorXd::Constant(g.size(), initial.r2[0]),
            VectorXd::Constant(g.size(), initial.s[0])};
  };

  ModelParams params = config.params;
  params.epsilon = config.refine.epsilon;
  const double T = config.time.T;
  const std::vector<double> ends{0.0, T};

  struct Level {
    Grid1D grid;
    FastState fast;
    LimitState limit;
  };
  auto solve = [&](const Grid1D& g, double dt) {
    const FastInitial ic = initial_on(g);
    auto f = run_fast(params, config.pair, g, ic, T, dt, ends);
    auto l = run_limit(params, config.pair, g, limit_initial_from(ic), T, dt, ends);
    return Level{g, f.final_frame(), l.final_frame()};
  };
  auto fast_distance = [](const Grid1D& target, const Level& a, const Level& b) {
    const double d1 = l2_difference_on(target, a.fast.r1, a.grid, b.fast.r1, b.grid);
    const double d2 = l2_difference_on(target, a.fast.r2, a.grid, b.fast.r2, b.grid);
    const double d3 = l2_difference_on(target, a.fast.s, a.grid, b.fast.s, b.grid);
    return std::sqrt(d1 * d1 + d2 * d2 + d3 * d3);
  };
  auto limit_distance = [](const Grid1D& target, const Level& a, const Level& b) {
    const double d1 = l2_difference_on(target, a.limit.r, a.grid, b.limit.r, b.grid);
    const double d2 = l2_difference_on(target, a.limit.s, a.grid, b.limit.s, b.grid);
    return std::sqrt(d1 * d1 + d2 * d2);
  };

  RefinementReport report;
  report.fast_space.label = "fast space";
  report.limit_space.label = "limit space";
  report.fast_time.label = "fast time";
  report.limit_time.label = "limit time";

  const std::vector<Eigen::Index> node_counts{64, 128, 256, 512};
  std::vector<Level> space_levels;
  for (auto n : node_counts) space_levels.push_back(solve(Grid1D(config.grid.L, n), config.time.dt));
  const Grid1D& coarsest = space_levels.front().grid;
  for (std::size_t j = 0; j < space_levels.size(); ++j) {
    report.fast_space.steps.push_back(space_levels[j].grid.dx());
    report.limit_space.steps.push_back(space_levels[j].grid.dx());
    if (j + 1 < space_levels.size()) {
      report.fast_space.differences.push_back(
          fast_distance(coarsest, space_levels[j], space_levels[j + 1]));
      report.limit_space.differences.push_back(
          limit_distance(coarsest, space_levels[j], space_levels[j + 1]));
    }
  }

  const Grid1D time_grid = make_grid(config);
  std::vector<Level> time_levels;
  for (double dt : {4e-3, 2e-3, 1e-3, 0.5e-3}) {
    time_levels.push_back(solve(time_grid, dt));
    report.fast_time.steps.push_back(dt);
    report.limit_time.steps.push_back(dt);
  }
  for (std::size_t j = 0; j + 1 < time_levels.size(); ++j) {
    report.fast_time.differences.push_back(fast_distance(time_grid, time_levels[j], time_levels[j + 1]));
    report.limit_time.differences.push_back(
        limit_distance(time_grid, time_levels[j], time_levels[j + 1]));
  }

  for (auto* s : {&report.fast_space, &report.limit_space, &report.fast_time, &report.limit_time}) {
    finish_series(*s);
  }
  return report;
}

StabilityReport run_stability_probe(const ExperimentConfig& config, double delta) {
  config.validate();
  const FastInitial ic = make_initial(make_grid(config));
  return run_stability_probe(config, delta, limit_initial_from(ic));
}

StabilityReport run_stability_probe(const ExperimentConfig& config, double delta,
                                    const LimitInitial& initial) {
  if (!(delta > 0.0 && delta <= 0.1)) throw DomainError("stability probe: delta must be in (0, 0.1]");
  const Grid1D grid = make_grid(config);
  const auto times = snapshot_grid(config);
  ModelParams params = config.params;
  params.epsilon = 1.0;
  const auto base =
      run_limit(params, config.pair, grid, initial, config.time.T, config.time.dt, times);

  StabilityReport report;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double d : {delta, delta / 10.0, delta / 100.0}) {
    const LimitInitial shifted{(initial.r.array() + d).matrix(), (initial.s.array() + d).matrix()};
    const auto pert =
        run_limit(params, config.pair, grid, shifted, config.time.T, config.time.dt, times);
    NormSeries dR{times, {}, "dR"};
    NormSeries dS{times, {}, "dS"};
    for (std::size_t k = 0; k < times.size(); ++k) {
      dR.values.push_back(lp_space_norm(pert.frames[k].r - base.frames[k].r, grid, 2.0));
      dS.values.push_back(lp_space_norm(pert.frames[k].s - base.frames[k].s, grid, 2.0));
    }
    const double eR = lp_spacetime_norm(dR, 2.0);
    const double eS = lp_spacetime_norm(dS, 2.0);
    const double shift_norm = d * std::sqrt(grid.length());
    StabilityPoint pt;
    pt.delta = d;
    pt.ratio = std::sqrt(eR * eR + eS * eS) / d;
    pt.max_ratio_R = *std::max_element(dR.values.begin(), dR.values.end()) / shift_norm;
    pt.max_ratio_S = *std::max_element(dS.values.begin(), dS.values.end()) / shift_norm;
    report.points.push_back(pt);
    lo = std::min(lo, pt.ratio);
    hi = std::max(hi, pt.ratio);
  }
  report.variation = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return report;
}

std::vector<SweepCheck> check_sweep(const SweepResult& result, const ExperimentConfig& config) {
  std::vector<SweepCheck> checks;
  auto describe_fit = [](const RateFit& f) {
    std::ostringstream os;
    os << "slope " << f.slope << ", r^2 " << f.r_squared << ", points " << f.points_used;
    return os.str();
  };
  auto rate_ok = [](const RateFit& f, bool need_r2) {
    return f.points_used >= 2 && f.slope >= kRateSlopeLow && f.slope <= kRateSlopeHigh &&
           (!need_r2 || f.r_squared >= kRateMinRSquared);
  };
  checks.push_back({"rate err_R", rate_ok(result.rate_R, true), describe_fit(result.rate_R)});
  checks.push_back({"rate err_S", rate_ok(result.rate_S, true), describe_fit(result.rate_S)});
  checks.push_back(
      {"rate manifold", rate_ok(result.rate_manifold, false), describe_fit(result.rate_manifold)});

  bool monotone = true;
  std::ostringstream mono;
  for (std::size_t k = 1; k < result.records.size(); ++k) {
    const auto& prev = result.records[k - 1];
    const auto& cur = result.records[k];
    if (cur.err_R_L2 > prev.err_R_L2 * (1.0 + kMonotoneSlack) ||
        cur.err_S_L2 > prev.err_S_L2 * (1.0 + kMonotoneSlack)) {
      monotone = false;
      mono << "increase at epsilon " << cur.epsilon << "; ";
    }
  }
  checks.push_back({"monotone error decay", monotone, monotone ? "ok" : mono.str()});

  double worst_floor = result.limit_bounds.toxicity_floor_margin;
  double worst_min = result.limit_bounds.min_field;
  for (const auto& b : result.fast_bounds) {
    worst_floor = std::min(worst_floor, b.toxicity_floor_margin);
    worst_min = std::min(worst_min, b.min_field);
  }
  checks.push_back({"toxicity lower bound", worst_floor >= -kToxicityFloorTolerance,
                    "worst margin " + format_double(worst_floor)});
  checks.push_back({"positivity", worst_min >= kPositivityTolerance,
                    "min field value " + format_double(worst_min)});
  const double ceiling =
      std::max(config.params.R_hat, result.limit_initial_max_R) * kCeilingFactor;
  checks.push_back({"limit L-infinity ceiling", result.limit_bounds.max_total_roots <= ceiling,
                    "max R " + format_double(result.limit_bounds.max_total_roots) + " vs ceiling " +
                        format_double(ceiling)});
  return checks;
}

}  // namespace fastlim
