#include "doa/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "doa/estimators.hpp"
#include "doa/rng.hpp"

namespace doa {

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct TrialResult {
  double error_deg = 0.0;
  bool failed = false;
};

// One Monte Carlo trial of one method. Seeds are derived from the global
// trial counter so scheduling cannot change the data a trial sees.
TrialResult run_trial(Method method, const ArrayConfig& cfg, const Emitter& emitter,
                      double noise_var, int n_snapshots, std::uint64_t master_seed,
                      std::uint64_t counter) {
  TrialResult result;
  if (method == Method::RootMusicPlusMaxRPQI) {
    const CombinedSnapshots slot = synthesize_combined(
        cfg, emitter, noise_var, n_snapshots, derive_seed(master_seed, 2 * counter + 1));
    const CombinedEstimate est =
        root_music_plus_max_rp_qi(slot.right, slot.left, cfg);
    result.error_deg = (est.angle - emitter.angle) * kDegPerRad;
    result.failed = est.low_confidence;
    return result;
  }

  const Eigen::VectorXd sectors = sector_centers(cfg.n_subarrays);
  const SnapshotMatrix snapshots = synthesize_snapshots(
      cfg, emitter, noise_var, n_snapshots, derive_seed(master_seed, 2 * counter),
      sectors);
  const PowerProfile profile = power_profile(snapshots, sectors);
  const double estimate =
      method == Method::MaxRP ? max_rp(profile) : max_rp_qi(profile).angle;
  result.error_deg = (estimate - emitter.angle) * kDegPerRad;
  return result;
}

double crlb_for(Method method, const ArrayConfig& cfg, const Emitter& emitter,
                double noise_var, int n_snapshots) {
  // Bound for the observation chain the method actually uses: the sectored
  // full array for Max-RP / Max-RP-QI, the two-part structure for the
  // combined method.
  ArrayConfig chain = cfg;
  int right_count = cfg.n_subarrays;
  if (method == Method::RootMusicPlusMaxRPQI) {
    right_count = cfg.n_subarrays - cfg.left_subarrays;
  } else {
    chain.left_subarrays = 0;
  }
  return hybrid_crlb(chain, emitter, noise_var, n_snapshots,
                     sector_centers(right_count))
      .crlb_deg;
}

}  // namespace

void ExperimentSpec::validate() const {
  cfg.validate();
  if (!(theta0_deg > 0.0 && theta0_deg < 180.0))
    throw std::invalid_argument("theta0_deg must lie in (0, 180)");
  if (snr_grid_db.empty() || snapshot_grid.empty())
    throw std::invalid_argument("grids must be nonempty");
  if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
  if (methods.empty()) throw std::invalid_argument("no methods requested");
  for (int l : snapshot_grid)
    if (l < 1) throw std::invalid_argument("snapshot counts must be >= 1");
  for (int kl : left_subarray_grid)
    if (kl < 2 || kl >= cfg.n_subarrays)
      throw std::invalid_argument("left subarray counts must lie in [2, K)");
}

std::vector<RmseRow> run_experiment(const ExperimentSpec& spec, int n_threads) {
  spec.validate();
  if (n_threads < 1) n_threads = 1;

  std::vector<int> k_grid = spec.left_subarray_grid;
  if (k_grid.empty()) k_grid.push_back(spec.cfg.left_subarrays);

  Emitter emitter;
  emitter.angle = spec.theta0_deg / kDegPerRad;
  emitter.power = 1.0;

  std::vector<RmseRow> rows;
  std::uint64_t grid_index = 0;
  for (int k_left : k_grid) {
    ArrayConfig cfg = spec.cfg;
    cfg.left_subarrays = k_left;
    for (double snr_db : spec.snr_grid_db) {
      const double noise_var = std::pow(10.0, -snr_db / 10.0) * emitter.power;
      for (int n_snap : spec.snapshot_grid) {
        for (Method method : spec.methods) {
          const std::uint64_t base =
              grid_index * static_cast<std::uint64_t>(spec.n_trials);
          ++grid_index;

          std::vector<TrialResult> trials(spec.n_trials);
          std::atomic<int> next{0};
          auto worker = [&] {
            for (int t = next.fetch_add(1); t < spec.n_trials;
                 t = next.fetch_add(1)) {
              trials[t] = run_trial(method, cfg, emitter, noise_var, n_snap,
                                    spec.master_seed, base + t);
            }
          };
          if (n_threads == 1) {
            worker();
          } else {
            std::vector<std::thread> pool;
            for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
          }

          // Aggregate in trial order so the sum is scheduling-independent.
          double sq_sum = 0.0;
          int failures = 0;
          for (const TrialResult& tr : trials) {
            if (tr.failed) {
              ++failures;
            } else {
              sq_sum += tr.error_deg * tr.error_deg;
            }
          }
          const int used = spec.n_trials - failures;
          RmseRow row;
          row.method = method;
          row.snr_db = snr_db;
          row.n_snapshots = n_snap;
          row.k_left = k_left;
          row.rmse_deg = used > 0 ? std::sqrt(sq_sum / used) : 0.0;
          row.n_trials = spec.n_trials;
          row.failures = failures;
          row.crlb_deg = crlb_for(method, cfg, emitter, noise_var, n_snap);
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

namespace {

void write_meta(const ExperimentSpec& spec, std::ostream& out) {
  out << "# n_antennas=" << spec.cfg.n_antennas
      << " subarray_size=" << spec.cfg.subarray_size
      << " n_subarrays=" << spec.cfg.n_subarrays
      << " left_subarrays=" << spec.cfg.left_subarrays
      << " spacing_wavelengths=" << fmt(spec.cfg.spacing_wavelengths)
      << " theta0_deg=" << fmt(spec.theta0_deg) << "\n";
  out << "# seed=" << spec.master_seed << " trials=" << spec.n_trials
      << " (per-trial seeds: splitmix64 of master_seed and trial counter)\n";
}

}  // namespace

void write_rmse_csv(const std::vector<RmseRow>& rows, const ExperimentSpec& spec,
                    std::ostream& out) {
  write_meta(spec, out);
  out << "method,snr_db,n_snapshots,k_left,rmse_deg,n_trials,failures,crlb_deg\n";
  for (const RmseRow& r : rows) {
    out << method_name(r.method) << ',' << fmt(r.snr_db) << ',' << r.n_snapshots
        << ',' << r.k_left << ',' << fmt(r.rmse_deg) << ',' << r.n_trials << ','
        << r.failures << ',' << fmt(r.crlb_deg) << "\n";
  }
}

void emit_power_profile(const ExperimentSpec& spec, std::ostream& out) {
  spec.validate();
  Emitter emitter;
  emitter.angle = spec.theta0_deg / kDegPerRad;
  emitter.power = 1.0;
  const int n_snap = spec.snapshot_grid.front();
  const Eigen::VectorXd sectors = sector_centers(spec.cfg.n_subarrays);

  write_meta(spec, out);
  out << "snr_db,sector_angle_deg,mean_power\n";
  std::uint64_t counter = 0;
  for (double snr_db : spec.snr_grid_db) {
    const double noise_var = std::pow(10.0, -snr_db / 10.0) * emitter.power;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(spec.cfg.n_subarrays);
    for (int t = 0; t < spec.n_trials; ++t) {
      const SnapshotMatrix snapshots =
          synthesize_snapshots(spec.cfg, emitter, noise_var, n_snap,
                               derive_seed(spec.master_seed, counter++), sectors);
      mean += power_profile(snapshots, sectors).powers;
    }
    mean /= spec.n_trials;
    for (int k = 0; k < mean.size(); ++k)
      out << fmt(snr_db) << ',' << fmt(sectors(k) * kDegPerRad) << ','
          << fmt(mean(k)) << "\n";
  }
}

void emit_complexity_curves(const std::vector<int>& n_grid, int subarray_size,
                            int n_snapshots, std::ostream& out) {
  if (n_grid.empty()) throw std::invalid_argument("antenna grid is empty");
  out << "# subarray_size=" << subarray_size << " snapshots=" << n_snapshots << "\n";
  out << "n_antennas,method,flops\n";
  for (int n : n_grid) {
    if (n <= 0 || n % subarray_size != 0)
      throw std::invalid_argument("antenna count must be a positive multiple of M");
    ArrayConfig cfg;
    cfg.n_antennas = n;
    cfg.subarray_size = subarray_size;
    cfg.n_subarrays = n / subarray_size;
    for (Method m : {Method::MaxRP, Method::MaxRPQI, Method::RootMusicPlusMaxRPQI,
                     Method::TLHAD}) {
      out << n << ',' << method_name(m) << ',' << fmt(flops(m, cfg, n_snapshots))
          << "\n";
    }
  }
}

void emit_crlb_table(const ExperimentSpec& spec, std::ostream& out) {
  spec.validate();
  Emitter emitter;
  emitter.angle = spec.theta0_deg / kDegPerRad;
  emitter.power = 1.0;
  const int right_count = spec.cfg.n_subarrays - spec.cfg.left_subarrays;
  const Eigen::VectorXd sectors = sector_centers(right_count);

  write_meta(spec, out);
  out << "snr_db,n_snapshots,crlb_deg\n";
  for (double snr_db : spec.snr_grid_db) {
    const double noise_var = std::pow(10.0, -snr_db / 10.0) * emitter.power;
    for (int n_snap : spec.snapshot_grid) {
      const CrlbPoint p =
          hybrid_crlb(spec.cfg, emitter, noise_var, n_snap, sectors);
      out << fmt(snr_db) << ',' << n_snap << ',' << fmt(p.crlb_deg) << "\n";
    }
  }
}

namespace {

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);

  ExperimentSpec spec;
  std::string line;
  while (std::getline(in, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line is not key=value: " + stripped);
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    try {
      if (key == "n_antennas") {
        spec.cfg.n_antennas = std::stoi(value);
      } else if (key == "subarray_size") {
        spec.cfg.subarray_size = std::stoi(value);
      } else if (key == "n_subarrays") {
        spec.cfg.n_subarrays = std::stoi(value);
      } else if (key == "left_subarrays") {
        spec.cfg.left_subarrays = std::stoi(value);
      } else if (key == "spacing_wavelengths") {
        spec.cfg.spacing_wavelengths = std::stod(value);
      } else if (key == "theta0_deg") {
        spec.theta0_deg = std::stod(value);
      } else if (key == "snr_db_list") {
        spec.snr_grid_db.clear();
        for (const auto& v : split_list(value)) spec.snr_grid_db.push_back(std::stod(v));
      } else if (key == "snapshots_list") {
        spec.snapshot_grid.clear();
        for (const auto& v : split_list(value)) spec.snapshot_grid.push_back(std::stoi(v));
      } else if (key == "left_subarrays_list") {
        spec.left_subarray_grid.clear();
        for (const auto& v : split_list(value))
          spec.left_subarray_grid.push_back(std::stoi(v));
      } else {
        throw std::invalid_argument("unknown config key: " + key);
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("bad value for config key " + key + ": " + value);
    }
  }
  return spec;
}

}  // namespace doa
