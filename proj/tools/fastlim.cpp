// fastlim: epsilon sweeps, oracle checks, refinement and stability studies.
//
// Exit codes: 0 pass, 1 acceptance failure, 2 configuration error,
// 3 solver failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fastlim/harness.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;

  fastlim::ExperimentConfig load() const {
    std::optional<std::string> path;
    if (!config_path.empty()) path = config_path;
    return fastlim::load_config(path, overrides);
  }
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "key = value configuration file");
  cmd->add_option("--set", opts.overrides, "override, e.g. --set params.rho=0.3")->take_all();
}

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

int do_sweep(const CommonOptions& opts) {
  const auto config = opts.load();
  const auto result = fastlim::run_sweep(config);
  fastlim::write_sweep_outputs(result, config.output_dir);
  std::printf("%-24s %-12s %-12s %-12s %-12s %s\n", "epsilon", "err_R", "err_S", "manifold",
              "neg_norm", "wall[s]");
  for (const auto& r : result.records) {
    std::printf("%-24.17g %-12.5e %-12.5e %-12.5e %-12.5e %.3f\n", r.epsilon, r.err_R_L2,
                r.err_S_L2, r.manifold_residual_L2, r.negative_norm_final, r.wall_time_seconds);
  }
  bool all = true;
  for (const auto& c : fastlim::check_sweep(result, config)) {
    std::printf("[%s] %s: %s\n", verdict(c.pass), c.name.c_str(), c.detail.c_str());
    all = all && c.pass;
  }
  std::printf("outputs written to %s\n", config.output_dir.c_str());
  return all ? kExitPass : kExitFail;
}

int do_oracle(const CommonOptions& opts) {
  const auto report = fastlim::run_homogeneous_oracle(opts.load());
  for (const auto& c : report.cases) {
    std::printf("[%s] %s: max discrepancy %.3e\n", verdict(c.pass), c.name.c_str(),
                c.max_discrepancy);
  }
  return report.pass() ? kExitPass : kExitFail;
}

void print_series(const fastlim::ConvergenceSeries& s) {
  std::printf("%s:", s.label.c_str());
  for (double d : s.differences) std::printf(" %.3e", d);
  if (s.applicable) {
    std::printf(" | orders");
    for (double o : s.orders) std::printf(" %.3f", o);
    std::printf("\n");
  } else {
    std::printf(" | orders n/a\n");
  }
}

int do_refine(const CommonOptions& opts) {
  const auto report = fastlim::run_refinement_study(opts.load());
  print_series(report.fast_space);
  print_series(report.limit_space);
  print_series(report.fast_time);
  print_series(report.limit_time);
  std::printf("[%s] spatial order 2 +- 0.4, temporal order 1 +- 0.4\n", verdict(report.pass()));
  return report.pass() ? kExitPass : kExitFail;
}

int do_stability(const CommonOptions& opts, double delta) {
  const auto report = fastlim::run_stability_probe(opts.load(), delta);
  for (const auto& p : report.points) {
    std::printf("delta %.1e: ratio %.6f (max_t dR %.4f, dS %.4f)\n", p.delta, p.ratio,
                p.max_ratio_R, p.max_ratio_S);
  }
  std::printf("[%s] ratio variation %.4f < 2\n", verdict(report.pass()), report.variation);
  return report.pass() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fast-reaction limit solver and convergence-rate harness"};
  app.require_subcommand(1);

  CommonOptions sweep_opts, oracle_opts, refine_opts, stability_opts;
  double delta = 0.1;
  auto* sweep = app.add_subcommand("sweep", "epsilon sweep with rate fits and CSV/JSON output");
  add_common(sweep, sweep_opts);
  auto* oracle = app.add_subcommand("oracle", "homogeneous runs against RK4 ODE reductions");
  add_common(oracle, oracle_opts);
  auto* refine = app.add_subcommand("refine", "space/time self-convergence study");
  add_common(refine, refine_opts);
  auto* stability = app.add_subcommand("stability", "initial-data stability probe of the limit system");
  add_common(stability, stability_opts);
  stability->add_option("--delta", delta, "largest perturbation, in (0, 0.1]")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (sweep->parsed()) return do_sweep(sweep_opts);
    if (oracle->parsed()) return do_oracle(oracle_opts);
    if (refine->parsed()) return do_refine(refine_opts);
    return do_stability(stability_opts, delta);
  } catch (const fastlim::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  }
}
