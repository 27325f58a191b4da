#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "doctest.h"
#include "fastlim/harness.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace fastlim;
using fastlim::testing::Gen;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Every column but the last (wall time).
std::string without_wall_time(const std::string& csv) {
  std::string out;
  for (const auto& line : lines_of(csv)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

ExperimentConfig small_sweep_config() {
  return parse_config(
      "grid.n = 32\n"
      "time.T = 0.5\n"
      "time.snapshot_count = 11\n"
      "sweep.epsilons = 1, 0.1, 0.01\n");
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("make_initial examples") {
  const Grid1D grid(M_PI / 10.0, 3);
  const auto ic = make_initial(grid);
  CHECK(ic.r1[0] == 1.0);
  CHECK(ic.r2[0] == 2.0);
  CHECK(ic.s[0] == 2.0);
  CHECK(ic.r1[1] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(std::abs(ic.r2[1]) <= 1e-15);
  CHECK(ic.s[1] == doctest::Approx(1.0 + std::cos(M_PI / 20.0)));

  const auto unit = make_initial(Grid1D(1.0, 257));
  CHECK(unit.s.minCoeff() == doctest::Approx(1.5403023058681398).epsilon(1e-15));
  CHECK((unit.r1 + unit.r2).maxCoeff() <= 4.0);
}

TEST_CASE("format_double round-trips with 17 digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(1e-5) == "1.0000000000000001e-05");
  Gen gen(41);
  for (int k = 0; k < 1000; ++k) {
    const double x = gen.log_uniform(1e-200, 1e200) * (k % 2 ? 1.0 : -1.0);
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("csv and json emitters") {
  std::vector<SweepRecord> records{{1.0, 0.5, 0.25, 2.0, 0.125, 3.5}, {0.1, 0.1, 0.2, 0.3, 0.4, 0.0}};
  const std::string csv = sweep_csv(records);
  CHECK(csv ==
        "epsilon,err_R_L2,err_S_L2,manifold_residual_L2,negative_norm_final,wall_time_seconds\n"
        "1,0.5,0.25,2,0.125,3.5\n"
        "0.10000000000000001,0.10000000000000001,0.20000000000000001,"
        "0.29999999999999999,0.40000000000000002,0\n");

  TrajectoryError err;
  err.series_R = {{0.0, 0.5}, {1.0, 2.0}, "R"};
  err.series_S = {{0.0, 0.5}, {3.0, 4.0}, "S"};
  CHECK(evolution_csv(err) == "t,norm_R_diff_L2,norm_S_diff_L2\n0,1,3\n0.5,2,4\n");

  SweepResult result;
  result.rate_R = {0.5, -1.0, 0.99, 7};
  result.rate_S = {0.4, -2.0, 0.98, 7};
  result.rate_manifold = {0.45, 0.1, 0.97, 7};
  const auto j = nlohmann::json::parse(rates_json(result));
  for (const char* key : {"err_R", "err_S", "manifold"}) {
    REQUIRE(j.contains(key));
    CHECK(j[key].contains("slope"));
    CHECK(j[key].contains("intercept"));
    CHECK(j[key].contains("r_squared"));
  }
  CHECK(j["err_R"]["slope"] == 0.5);
  CHECK(j["err_S"]["intercept"] == -2.0);
  CHECK(j["manifold"]["r_squared"] == 0.97);
}

TEST_CASE("check_sweep on synthetic results") {
  const auto config = default_config();
  SweepResult result;
  for (double eps : {1.0, 0.1, 0.01}) {
    const double e = std::sqrt(eps);
    result.records.push_back({eps, e, 2.0 * e, 3.0 * e, 0.0, 0.0});
  }
  result.rate_R = {0.5, 0.0, 1.0, 2};
  result.rate_S = {0.5, std::log(2.0), 1.0, 2};
  result.rate_manifold = {0.5, std::log(3.0), 1.0, 2};
  result.fast_bounds.assign(3, RunBounds{0.1, 0.0, 3.0});
  result.limit_bounds = {0.1, 0.0, 3.0};
  result.limit_initial_max_R = 4.0;
  auto all_pass = [&] {
    bool ok = true;
    for (const auto& c : check_sweep(result, config)) ok = ok && c.pass;
    return ok;
  };
  CHECK(check_sweep(result, config).size() == 7);
  CHECK(all_pass());

  auto broken = result;
  result.rate_S.slope = 0.9;
  CHECK_FALSE(all_pass());
  result = broken;
  result.rate_R.r_squared = 0.9;
  CHECK_FALSE(all_pass());
  result = broken;
  result.rate_manifold.r_squared = 0.1;  // no r^2 requirement on the manifold fit
  CHECK(all_pass());
  result = broken;
  result.records[2].err_S_L2 = 1.1 * result.records[1].err_S_L2;
  CHECK_FALSE(all_pass());
  result = broken;
  result.fast_bounds[1].toxicity_floor_margin = -1e-5;
  CHECK_FALSE(all_pass());
  result = broken;
  result.limit_bounds.min_field = -1e-9;
  CHECK_FALSE(all_pass());
  result = broken;
  result.limit_bounds.max_total_roots = 4.05;
  CHECK_FALSE(all_pass());
  result = broken;
  result.rate_R.points_used = 0;
  result.rate_R.slope = std::nan("");
  CHECK_FALSE(all_pass());
}

TEST_CASE("small sweep: outputs, shapes and determinism") {
  const auto config = small_sweep_config();
  const auto a = run_sweep(config);
  REQUIRE(a.records.size() == 3);
  CHECK(a.evolution.size() == 3);
  CHECK(a.fast_bounds.size() == 3);
  double max_R0 = 0.0;
  for (int i = 0; i < 32; ++i) {
    const double x = i / 31.0;
    max_R0 = std::max(max_R0, 2.0 + std::sin(10.0 * x) + std::cos(20.0 * x));
  }
  CHECK(a.limit_initial_max_R == doctest::Approx(max_R0).epsilon(1e-14));
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(a.records[k].epsilon == config.sweep[k]);
    CHECK(a.records[k].err_R_L2 > 0.0);
    CHECK(a.records[k].err_S_L2 > 0.0);
    CHECK(a.records[k].manifold_residual_L2 > 0.0);
    CHECK(a.records[k].wall_time_seconds > 0.0);
    CHECK(a.evolution[k].series_R.times.size() == 11);
    if (k > 0) {
      CHECK(a.records[k].err_R_L2 < a.records[k - 1].err_R_L2);
      CHECK(a.records[k].err_S_L2 < a.records[k - 1].err_S_L2);
    }
  }
  CHECK(a.rate_R.points_used == 2);  // one pre-asymptotic point dropped

  const auto b = run_sweep(config);
  CHECK(without_wall_time(sweep_csv(a.records)) == without_wall_time(sweep_csv(b.records)));
  CHECK(rates_json(a) == rates_json(b));
  for (std::size_t k = 0; k < 3; ++k) CHECK(evolution_csv(a.evolution[k]) == evolution_csv(b.evolution[k]));

  const auto dir = scratch("fastlim_sweep_test");
  write_sweep_outputs(a, dir / "out");
  const std::string csv = slurp(dir / "out" / "sweep.csv");
  CHECK(csv.find('\r') == std::string::npos);
  const auto rows = lines_of(csv);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] ==
        "epsilon,err_R_L2,err_S_L2,manifold_residual_L2,negative_norm_final,wall_time_seconds");
  for (int k = 0; k < 3; ++k) {
    const auto evo = lines_of(slurp(dir / "out" / ("evolution_eps_" + std::to_string(k) + ".csv")));
    REQUIRE(evo.size() == 12);
    CHECK(evo[0] == "t,norm_R_diff_L2,norm_S_diff_L2");
    CHECK(evo[1].rfind("0,", 0) == 0);
  }
  CHECK_FALSE(std::filesystem::exists(dir / "out" / "evolution_eps_3.csv"));
  CHECK(nlohmann::json::parse(slurp(dir / "out" / "rates.json"))["err_R"]["slope"] ==
        a.rate_R.slope);
  std::filesystem::remove_all(dir);
}

TEST_CASE("single-epsilon sweep has no rate fit") {
  auto config = small_sweep_config();
  config.sweep = {0.1};
  const auto result = run_sweep(config);
  CHECK(result.records.size() == 1);
  CHECK(result.rate_R.points_used == 0);
  CHECK(std::isnan(result.rate_R.slope));
  const auto j = nlohmann::json::parse(rates_json(result));
  CHECK(j["err_R"]["slope"].is_null());
}

TEST_CASE("oracle: inert dynamics on the manifold agree to roundoff") {
  auto config = parse_config("grid.n = 8\noracle.T = 0.5\noracle.dt = 1e-3\n");
  ModelParams p = config.params;
  p.gamma1 = p.gamma2 = p.eta1 = p.eta2 = p.mu = p.rho = 0.0;
  p.epsilon = 0.1;
  const auto fast = homogeneous_fast_case(config, p, {0.7, 1.4, 1.0});
  CHECK(fast.max_discrepancy < 1e-10);
  CHECK(fast.pass);
  const auto limit = homogeneous_limit_case(config, p, {2.0, 1.0});
  CHECK(limit.max_discrepancy < 1e-10);

  const auto report = run_homogeneous_oracle(config);
  CHECK(report.cases.size() == 3);
  CHECK(OracleReport{}.pass() == false);
}

TEST_CASE("rk4 reductions against closed forms") {
  // gamma = eta = mu = 0, rho = 0.2: S decays as exp(-rho t), R is frozen.
  ModelParams p;
  p.gamma1 = p.gamma2 = p.eta1 = p.eta2 = p.mu = 0.0;
  const TransitionPair pair = PowerPair{1.0, -1.0};
  const auto lim = rk4_limit_ode(p, pair, {2.0, 1.0}, {0.0, 1.0, 2.0}, 1e-3);
  REQUIRE(lim.size() == 3);
  CHECK(lim[2][0] == doctest::Approx(2.0));
  CHECK(lim[1][1] == doctest::Approx(std::exp(-0.2)).epsilon(1e-12));
  CHECK(lim[2][1] == doctest::Approx(std::exp(-0.4)).epsilon(1e-12));

  p.rho = 0.0;
  p.epsilon = 0.5;
  // pure exchange conserves the total
  const auto fast = rk4_fast_ode(p, pair, {3.0, 1.0, 1.0}, {0.0, 0.25}, 1e-4);
  const double total = fast[1][0] + fast[1][1];
  CHECK(total == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("interpolate_cubic is exact on cubics") {
  Gen gen(51);
  for (int trial = 0; trial < 100; ++trial) {
    const Grid1D grid(gen.uniform(0.5, 3.0), gen.integer(4, 40));
    const double c0 = gen.uniform(-2, 2), c1 = gen.uniform(-2, 2), c2 = gen.uniform(-2, 2),
                 c3 = gen.uniform(-2, 2);
    auto cubic = [&](double x) { return c0 + x * (c1 + x * (c2 + x * c3)); };
    const VectorXd u = fastlim::testing::sample(grid, cubic);
    for (int k = 0; k < 10; ++k) {
      const double x = gen.uniform(0.0, grid.length());
      CHECK(interpolate_cubic(u, grid, x) == doctest::Approx(cubic(x)).epsilon(1e-10));
    }
    const Eigen::Index i = gen.integer(0, grid.size() - 1);
    CHECK(interpolate_cubic(u, grid, grid.node(i)) == doctest::Approx(u[i]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(interpolate_cubic(VectorXd::Ones(3), Grid1D(1.0, 5), 0.5), DomainError);
}

TEST_CASE("refinement with constant data has no spatial order") {
  const auto config = parse_config("time.T = 0.2\n");
  const Eigen::Index n = 8;
  const FastInitial ic{VectorXd::Constant(n, 1.0), VectorXd::Constant(n, 1.0),
                       VectorXd::Constant(n, 1.0)};
  const auto report = run_refinement_study(config, ic);
  CHECK_FALSE(report.fast_space.applicable);
  CHECK_FALSE(report.limit_space.applicable);
  CHECK(std::isnan(report.fast_space.order()));
  CHECK(report.fast_time.applicable);
  CHECK(report.fast_time.order() == doctest::Approx(1.0).epsilon(0.2));
  CHECK(report.limit_time.order() == doctest::Approx(1.0).epsilon(0.2));
  CHECK_FALSE(report.pass());
  CHECK(report.fast_space.steps.size() == 4);
  CHECK(report.fast_space.differences.size() == 3);
}

TEST_CASE("stability probe without a toxicity source") {
  auto config = parse_config("grid.n = 64\ntime.T = 1\nparams.mu = 0\n");
  const auto report = run_stability_probe(config, 0.1);
  REQUIRE(report.points.size() == 3);
  CHECK(report.points[0].delta == 0.1);
  CHECK(report.points[2].delta == doctest::Approx(1e-3));
  for (const auto& pt : report.points) {
    // S decouples from R, so a constant shift stays constant and decays.
    CHECK(pt.max_ratio_S == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(pt.max_ratio_S <= 1.0 + 1e-3);
  }
  CHECK(report.variation >= 1.0);
  CHECK(report.pass());
  CHECK_THROWS_AS(run_stability_probe(config, 0.0), DomainError);
  CHECK_THROWS_AS(run_stability_probe(config, 0.2), DomainError);
}

#ifdef FASTLIM_CLI_PATH
namespace {

int cli(const std::string& args) {
  const std::string command = std::string("\"") + FASTLIM_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("cli exit codes") {
  const auto dir = scratch("fastlim_cli_test");
  const std::string quick = "--set grid.n=8 --set oracle.T=0.1 --set oracle.dt=1e-3 ";
  CHECK(cli("oracle " + quick + "--set oracle.tolerance=1") == 0);
  CHECK(cli("oracle " + quick + "--set oracle.tolerance=1e-300") == 1);
  CHECK(cli("oracle --set params.bogus=1") == 2);
  CHECK(cli("oracle --set params.d_R2=1") == 2);
  CHECK(cli("oracle --config " + (dir / "missing.cfg").string()) == 2);
  CHECK(cli("stability") == 2);
  CHECK(cli("frobnicate") == 2);
  CHECK(cli("stability --delta 0.1 --set grid.n=16 --set pair.kind=saturation --set pair.S_hat=1.5") ==
        3);
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "# tiny sweep\ngrid.n = 16\ntime.T = 0.1\ntime.snapshot_count = 3\n"
        << "sweep.epsilons = 0.1\noutput_dir = " << (dir / "out").string() << "\n";
  }
  cli("sweep --config " + (dir / "run.cfg").string());
  CHECK(std::filesystem::exists(dir / "out" / "sweep.csv"));
  CHECK(std::filesystem::exists(dir / "out" / "evolution_eps_0.csv"));
  CHECK(std::filesystem::exists(dir / "out" / "rates.json"));
  std::filesystem::remove_all(dir);
}
#endif
