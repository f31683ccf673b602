// Command-line front end for the hybrid-array DOA estimator benchmarks.
// Angles are degrees at this boundary; the library works in radians.

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "doa/harness.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 1;
  int trials = 0;  // 0: keep spec default
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "key=value config file");
  cmd->add_option("--out", opts.out_path, "output CSV path (default: stdout)");
  cmd->add_option("--seed", opts.seed, "master RNG seed");
  cmd->add_option("--trials", opts.trials, "Monte Carlo trials per grid point");
  cmd->add_option("--threads", opts.threads, "worker threads");
}

doa::ExperimentSpec make_spec(const CommonOpts& opts) {
  doa::ExperimentSpec spec;
  if (!opts.config_path.empty()) spec = doa::load_experiment_spec(opts.config_path);
  spec.master_seed = opts.seed;
  if (opts.trials > 0) spec.n_trials = opts.trials;
  return spec;
}

int with_output(const CommonOpts& opts, const std::function<void(std::ostream&)>& fn) {
  if (opts.out_path.empty()) {
    fn(std::cout);
    return 0;
  }
  std::ofstream out(opts.out_path);
  if (!out) {
    std::cerr << "error: cannot open output file " << opts.out_path << "\n";
    return kExitNumericalError;
  }
  fn(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-time-slot DOA estimation benchmarks for a sub-connected hybrid ULA"};
  app.require_subcommand(1);

  CommonOpts rmse_opts, profile_opts, complexity_opts, crlb_opts;
  std::vector<int> n_grid = {1024, 2048, 4096, 8192};

  CLI::App* rmse = app.add_subcommand("rmse-sweep", "RMSE vs SNR/snapshots Monte Carlo sweep");
  add_common(rmse, rmse_opts);

  CLI::App* profile = app.add_subcommand("power-profile", "mean per-sector receive power");
  add_common(profile, profile_opts);

  CLI::App* complexity = app.add_subcommand("complexity", "FLOP counts vs antenna count");
  add_common(complexity, complexity_opts);
  complexity->add_option("--antennas", n_grid, "antenna-count grid");

  CLI::App* crlb = app.add_subcommand("crlb", "numerical hybrid root-CRLB table");
  add_common(crlb, crlb_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (rmse->parsed()) {
      const doa::ExperimentSpec spec = make_spec(rmse_opts);
      const auto rows = doa::run_experiment(spec, rmse_opts.threads);
      return with_output(rmse_opts,
                         [&](std::ostream& out) { doa::write_rmse_csv(rows, spec, out); });
    }
    if (profile->parsed()) {
      doa::ExperimentSpec spec = make_spec(profile_opts);
      if (profile_opts.trials == 0) spec.n_trials = 100;
      return with_output(profile_opts,
                         [&](std::ostream& out) { doa::emit_power_profile(spec, out); });
    }
    if (complexity->parsed()) {
      doa::ExperimentSpec spec = make_spec(complexity_opts);
      const int n_snap = spec.snapshot_grid.empty() ? 100 : spec.snapshot_grid.front();
      return with_output(complexity_opts, [&](std::ostream& out) {
        doa::emit_complexity_curves(n_grid, spec.cfg.subarray_size, n_snap, out);
      });
    }
    if (crlb->parsed()) {
      const doa::ExperimentSpec spec = make_spec(crlb_opts);
      return with_output(crlb_opts,
                         [&](std::ostream& out) { doa::emit_crlb_table(spec, out); });
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumericalError;
  }
  return 0;
}
