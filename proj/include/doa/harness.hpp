#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "doa/array_model.hpp"
#include "doa/crlb.hpp"

namespace doa {

// Seeded Monte Carlo experiment definition.
struct ExperimentSpec {
  ArrayConfig cfg;
  double theta0_deg = 41.0;
  std::vector<double> snr_grid_db = {-10, -5, 0, 5, 10, 15, 20};
  std::vector<int> snapshot_grid = {100};
  std::vector<int> left_subarray_grid = {};  // empty -> {cfg.left_subarrays}
  int n_trials = 500;
  std::uint64_t master_seed = 1;
  std::vector<Method> methods = {Method::MaxRP, Method::MaxRPQI,
                                 Method::RootMusicPlusMaxRPQI};

  void validate() const;
};

struct RmseRow {
  Method method;
  double snr_db;
  int n_snapshots;
  int k_left;
  double rmse_deg;
  int n_trials;
  int failures;  // flagged trials, excluded from rmse_deg
  double crlb_deg;
};

// Runs every (k_left, snr, L) grid point for every requested method.
// Per-trial seeds derive from master_seed and the trial counter alone, so
// the result is independent of thread scheduling.
std::vector<RmseRow> run_experiment(const ExperimentSpec& spec, int n_threads = 1);

void write_rmse_csv(const std::vector<RmseRow>& rows, const ExperimentSpec& spec,
                    std::ostream& out);

// Mean per-sector power profile over n_trials time slots, one block per SNR.
void emit_power_profile(const ExperimentSpec& spec, std::ostream& out);

// FLOP-count curves over an antenna-count grid at fixed M and L.
void emit_complexity_curves(const std::vector<int>& n_grid, int subarray_size,
                            int n_snapshots, std::ostream& out);

// CRLB over the spec's SNR x snapshot grid.
void emit_crlb_table(const ExperimentSpec& spec, std::ostream& out);

// Plain key=value config file; unknown keys are rejected.
ExperimentSpec load_experiment_spec(const std::string& path);

}  // namespace doa
