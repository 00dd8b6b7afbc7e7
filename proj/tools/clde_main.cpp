// Copyright 2026 The clde Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver: simulate, compare, check-gains, dwell-time, lyapunov
// and fixture subcommands.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 numerical
// divergence, 3 internal error, 4 gain conditions not satisfied.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clde/config_io.hpp"
#include "clde/errors.hpp"
#include "clde/estimator.hpp"
#include "clde/fixture.hpp"
#include "clde/lyapunov.hpp"
#include "clde/sim.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDivergence = 2;
constexpr int kExitInternal = 3;
constexpr int kExitGainsFail = 4;

struct UsageError : clde::Error {
  using Error::Error;
};

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::string method;
  std::optional<std::uint64_t> seed;
  std::optional<double> noise_variance;
  bool print_config = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-c,--config", o.config_path, "configuration file (INI)");
  cmd->add_option("--seed", o.seed, "override sim.seed");
  cmd->add_option("--noise-variance", o.noise_variance,
                  "override sim.noise_variance");
  cmd->add_option("--method", o.method,
                  "dynamic-observer or numerical-differentiation");
  cmd->add_option("-o,--out-dir", o.out_dir,
                  "output directory (default: $CLDE_OUT_DIR, else .)");
  cmd->add_flag("--print-config", o.print_config,
                "print the resolved configuration and exit");
}

clde::SimConfig resolve_config(const CommonOptions& o) {
  clde::SimConfig cfg =
      o.config_path.empty() ? clde::SimConfig{} : clde::load_config(o.config_path);
  if (o.seed) cfg.seed = *o.seed;
  if (o.noise_variance) cfg.noise_variance = *o.noise_variance;
  if (!o.method.empty()) cfg.method = clde::parse_method(o.method);
  clde::validate(cfg);
  return cfg;
}

fs::path resolve_out_dir(const CommonOptions& o) {
  fs::path dir = ".";
  if (!o.out_dir.empty()) {
    dir = o.out_dir;
  } else if (const char* env = std::getenv("CLDE_OUT_DIR"); env && *env) {
    dir = env;
  }
  fs::create_directories(dir);
  return dir;
}

std::string command_line(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) out += ' ';
    out += argv[i];
  }
  return out;
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ofstream os(path);
  if (!os) throw clde::Error("cannot open " + path.string() + " for writing");
  writer(os);
  if (!os) throw clde::Error("failed writing " + path.string());
}

void write_manifest(const fs::path& dir, const clde::SimConfig& cfg,
                    const std::string& command,
                    const std::vector<std::string>& outputs) {
  const clde::RunManifest m{cfg, CLDE_VERSION, command, outputs};
  write_file(dir / "manifest.ini",
             [&](std::ostream& os) { os << clde::render_manifest(m); });
}

// Metrics are skipped for the partial log of a diverged run.
void write_run(const fs::path& dir, const clde::SimConfig& cfg,
               const clde::TrajectoryLog& log, const std::string& command,
               bool complete = true) {
  write_file(dir / "log.csv",
             [&](std::ostream& os) { clde::write_log_csv(os, log); });
  write_file(dir / "switches.csv",
             [&](std::ostream& os) { clde::write_switch_csv(os, log); });
  write_file(dir / "lyapunov.csv",
             [&](std::ostream& os) { clde::write_lyapunov_csv(os, log); });
  std::vector<std::string> outputs{"log.csv", "switches.csv", "lyapunov.csv"};
  if (complete) {
    write_file(dir / "metrics.csv", [&](std::ostream& os) {
      clde::write_metrics(os, clde::run_metrics(cfg, log));
    });
    outputs.push_back("metrics.csv");
  }
  write_manifest(dir, cfg, command, outputs);
}

// Rebuilds a TrajectoryLog from the files written by `simulate`.
clde::TrajectoryLog load_run(const fs::path& dir, const clde::SimConfig& cfg) {
  auto open = [&](const char* name) {
    std::ifstream is(dir / name);
    if (!is) throw UsageError("cannot read " + (dir / name).string());
    return is;
  };
  clde::TrajectoryLog log;
  {
    std::ifstream is = open("log.csv");
    log.rows = clde::read_log_csv(is);
  }
  {
    std::ifstream is = open("switches.csv");
    log.stacks = clde::read_switch_csv(is);
  }
  {
    std::ifstream is = open("lyapunov.csv");
    log.lyapunov = clde::read_lyapunov_csv(is);
  }
  for (std::size_t i = 1; i < log.stacks.size(); ++i) {
    log.switch_times.push_back(log.stacks[i].t);
  }
  log.theta_true = cfg.plant.theta_true;
  log.gamma = cfg.estimator.gamma;
  log.alpha1 = cfg.observer.alpha1;
  log.gamma1 = cfg.observer.gamma1;
  log.method = clde::to_string(cfg.method);
  return log;
}

int cmd_simulate(const CommonOptions& o, const std::string& command) {
  const clde::SimConfig cfg = resolve_config(o);
  if (o.print_config) {
    std::cout << clde::render_config(cfg);
    return kExitOk;
  }
  const fs::path dir = resolve_out_dir(o);
  try {
    const clde::TrajectoryLog log = clde::run_experiment(cfg);
    write_run(dir, cfg, log, command);
    std::cout << "final relative error "
              << clde::format_double(clde::final_relative_error(log))
              << "\nswitches " << log.switch_times.size() << "\nwrote "
              << dir.string() << "\n";
    return kExitOk;
  } catch (const clde::DivergenceError& e) {
    write_run(dir, cfg, e.partial_log(), command, false);
    std::cerr << "divergence: " << e.what() << " (partial log in "
              << dir.string() << ")\n";
    return kExitDivergence;
  }
}

int cmd_compare(const CommonOptions& o, std::optional<int> trials,
                std::optional<int> threads, const std::string& command) {
  clde::SimConfig cfg = resolve_config(o);
  if (trials) cfg.sweep.trials = *trials;
  if (threads) cfg.sweep.threads = *threads;
  clde::validate(cfg);
  if (o.print_config) {
    std::cout << clde::render_config(cfg);
    return kExitOk;
  }
  const fs::path dir = resolve_out_dir(o);
  const clde::ComparisonTable table =
      clde::compare_methods(cfg, cfg.sweep.variances, cfg.sweep.trials);
  const std::string text = clde::render_comparison(table);
  write_file(dir / "comparison.csv",
             [&](std::ostream& os) { clde::write_comparison_csv(os, table); });
  write_file(dir / "comparison.txt", [&](std::ostream& os) { os << text; });
  write_manifest(dir, cfg, command, {"comparison.csv", "comparison.txt"});
  std::cout << text;
  for (const clde::ComparisonCell& c : table.cells) {
    for (const std::string& err : c.errors) {
      std::cerr << clde::to_string(c.method) << ": " << err << "\n";
    }
  }
  return kExitOk;
}

struct BoundOptions {
  std::string log_dir;
  std::vector<double> bounds;  // F, F1, x, Y, A, a_lower
};

int cmd_check_gains(const CommonOptions& o, const BoundOptions& b) {
  const clde::SimConfig cfg = resolve_config(o);
  if (o.print_config) {
    std::cout << clde::render_config(cfg);
    return kExitOk;
  }
  clde::BoundConstants bounds;
  if (!b.bounds.empty()) {
    if (b.bounds.size() != 6) {
      throw UsageError("--bounds takes F_bar F1_bar x_bar Y_bar A_bar a_lower");
    }
    bounds.F_bar = b.bounds[0];
    bounds.F1_bar = b.bounds[1];
    bounds.x_bar = b.bounds[2];
    bounds.Y_bar = b.bounds[3];
    bounds.A_bar = b.bounds[4];
    bounds.a_lower = b.bounds[5];
    bounds.Gamma_bar = clde::spectral_norm(cfg.estimator.gamma);
  } else if (!b.log_dir.empty()) {
    bounds = clde::estimate_bound_constants(load_run(b.log_dir, cfg),
                                            clde::TwoLinkArm(cfg.plant));
  } else {
    throw UsageError("check-gains needs --bounds or --log-dir");
  }
  const clde::GainConditionReport report = clde::check_gain_conditions(
      bounds, cfg.estimator.k, cfg.observer.k1, cfg.observer.alpha1);
  std::cout << clde::to_text(report);
  if (!o.out_dir.empty() || std::getenv("CLDE_OUT_DIR")) {
    const fs::path dir = resolve_out_dir(o);
    write_file(dir / "gain_conditions.csv",
               [&](std::ostream& os) { clde::write_csv(os, report); });
  }
  return report.pass() ? kExitOk : kExitGainsFail;
}

int cmd_dwell_time(const CommonOptions& o, const std::string& log_dir) {
  const clde::SimConfig cfg = resolve_config(o);
  const clde::TrajectoryLog log = load_run(log_dir, cfg);
  if (log.switch_times.size() < 2) {
    throw UsageError("dwell-time needs a log with at least two switches");
  }
  const clde::BoundConstants bounds =
      clde::estimate_bound_constants(log, clde::TwoLinkArm(cfg.plant));
  const clde::DwellTimeInputs in = clde::dwell_time_inputs(
      log, bounds, cfg.estimator.k, cfg.observer.k1, cfg.observer.alpha1);
  std::cout << "switches " << log.switch_times.size() << "\nv "
            << clde::format_double(in.v) << "\nv_bar "
            << clde::format_double(in.v_bar) << "\nv_r "
            << clde::format_double(in.v_r) << "\nmin dwell time "
            << clde::format_double(clde::min_dwell_time(in))
            << "\nconfigured dwell " << clde::format_double(cfg.purge.dwell)
            << "\n";
  return kExitOk;
}

int cmd_lyapunov(const CommonOptions& o, const std::string& log_dir) {
  const clde::SimConfig cfg = resolve_config(o);
  const clde::TrajectoryLog log = load_run(log_dir, cfg);
  const clde::BoundConstants bounds =
      clde::estimate_bound_constants(log, clde::TwoLinkArm(cfg.plant));
  const double v = clde::decay_rate(cfg.estimator.k, bounds.a_lower,
                                    cfg.observer.k1, cfg.observer.alpha1);
  const double v_bar = clde::quadratic_bounds(cfg.estimator.gamma).v_bar;
  const auto sw = clde::check_switch_decrease(log.lyapunov, log.switch_times);
  const auto env = clde::check_interswitch_envelope(
      log.lyapunov, log.switch_times, v, v_bar,
      clde::iota_sequence(log, bounds, cfg.estimator.k, cfg.observer.k1));
  const auto chain =
      clde::observer_chain_counterexamples(log.lyapunov, cfg.observer.alpha1);
  const fs::path dir = o.out_dir.empty() ? fs::path(log_dir) : resolve_out_dir(o);
  write_file(dir / "switch_violations.csv",
             [&](std::ostream& os) { clde::write_csv(os, sw); });
  write_file(dir / "envelope_violations.csv",
             [&](std::ostream& os) { clde::write_csv(os, env); });
  std::cout << clde::summarize(sw, env) << "observer chain counterexamples "
            << chain.size() << "\n";
  return kExitOk;
}

int cmd_fixture(const CommonOptions& o, const std::string& check_path) {
  const clde::SimConfig cfg = resolve_config(o);
  if (o.print_config) {
    std::cout << clde::render_config(cfg);
    return kExitOk;
  }
  const clde::TrajectoryLog log = clde::run_experiment(cfg);
  if (!check_path.empty()) {
    std::ifstream is(check_path);
    if (!is) throw UsageError("cannot read " + check_path);
    std::stringstream ss;
    ss << is.rdbuf();
    const clde::RegressionResult r =
        clde::regression_check(clde::fixture_from_json(ss.str()), cfg, log);
    for (const std::string& m : r.mismatches) std::cout << m << "\n";
    std::cout << (r.pass ? "fixture matches\n" : "fixture mismatch\n");
    return r.pass ? kExitOk : kExitInternal;
  }
  const fs::path dir = resolve_out_dir(o);
  const clde::GoldenFixture fx = clde::make_fixture(cfg, log, CLDE_VERSION);
  write_file(dir / "fixture.json",
             [&](std::ostream& os) { os << clde::to_json(fx); });
  std::cout << "wrote " << (dir / "fixture.json").string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concurrent-learning parameter estimation with state-derivative "
               "estimates"};
  app.set_version_flag("--version", std::string(CLDE_VERSION));
  app.require_subcommand(1);

  CommonOptions common;
  std::optional<int> trials, threads;
  BoundOptions bound_opts;
  std::string log_dir, check_path;

  auto* simulate = app.add_subcommand("simulate", "run one experiment");
  add_common(simulate, common);

  auto* compare = app.add_subcommand(
      "compare", "sweep both methods over the configured noise variances");
  add_common(compare, common);
  compare->add_option("--trials", trials, "override sweep.trials");
  compare->add_option("--threads", threads, "override sweep.threads");

  auto* gains = app.add_subcommand("check-gains",
                                   "evaluate the sufficient gain conditions");
  add_common(gains, common);
  gains->add_option("--log-dir", bound_opts.log_dir,
                    "simulate output used to estimate the bounds");
  gains->add_option("--bounds", bound_opts.bounds,
                    "F_bar F1_bar x_bar Y_bar A_bar a_lower")
      ->expected(6);

  auto* dwell = app.add_subcommand("dwell-time",
                                   "minimum dwell time from a logged run");
  add_common(dwell, common);
  dwell->add_option("--log-dir", log_dir, "simulate output directory")
      ->required();

  auto* lyap = app.add_subcommand(
      "lyapunov", "check the switched Lyapunov bounds on a logged run");
  add_common(lyap, common);
  lyap->add_option("--log-dir", log_dir, "simulate output directory")
      ->required();

  auto* fixture = app.add_subcommand(
      "fixture", "write a golden fixture, or check a run against one");
  add_common(fixture, common);
  fixture->add_option("--check", check_path, "fixture JSON to compare against");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  const std::string command = command_line(argc, argv);
  try {
    if (*simulate) return cmd_simulate(common, command);
    if (*compare) return cmd_compare(common, trials, threads, command);
    if (*gains) return cmd_check_gains(common, bound_opts);
    if (*dwell) return cmd_dwell_time(common, log_dir);
    if (*lyap) return cmd_lyapunov(common, log_dir);
    if (*fixture) return cmd_fixture(common, check_path);
  } catch (const clde::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const clde::ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const clde::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
