// Acceptance gate: one criterion per invocation, one PASS/FAIL line each.
// Exit code 0 on pass, 1 on fail, 2 on usage error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "doa/array_model.hpp"
#include "doa/crlb.hpp"
#include "doa/estimators.hpp"
#include "doa/harness.hpp"
#include "doa/numerics.hpp"
#include "doa/rng.hpp"

using namespace doa;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegPerRad = 180.0 / kPi;

int hw_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n ? static_cast<int>(n) : 4;
}

ArrayConfig paper_cfg(int q = 32) {
  ArrayConfig cfg;
  cfg.n_antennas = 1024;
  cfg.subarray_size = 8;
  cfg.n_subarrays = 128;
  cfg.left_subarrays = q;
  return cfg;
}

double containing_sector_deg(double theta0_deg, int k) {
  const Eigen::VectorXd centers = sector_centers(k);
  const double width_deg = 180.0 / k;
  for (int i = 0; i < k; ++i) {
    const double c = centers(i) * kDegPerRad;
    if (theta0_deg > c - width_deg / 2.0 && theta0_deg <= c + width_deg / 2.0)
      return c;
  }
  return centers(k - 1) * kDegPerRad;
}

const RmseRow& find_row(const std::vector<RmseRow>& rows, Method m, double snr,
                        int n_snap, int k_left) {
  for (const RmseRow& r : rows)
    if (r.method == m && r.snr_db == snr && r.n_snapshots == n_snap &&
        r.k_left == k_left)
      return r;
  throw std::runtime_error("missing experiment row");
}

// --- criterion 1: noiseless oracle ---------------------------------------

bool criterion1(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  const ArrayConfig cfg = paper_cfg(32);
  Emitter emitter;
  emitter.angle = 41.0 / kDegPerRad;

  const Eigen::VectorXd sectors = sector_centers(128);
  const SnapshotMatrix full =
      synthesize_snapshots(cfg, emitter, 0.0, 16, 1, sectors);
  const PowerProfile profile = power_profile(full, sectors);
  const double maxrp_deg = max_rp(profile) * kDegPerRad;
  const double qi_deg = max_rp_qi(profile).angle * kDegPerRad;

  const CombinedSnapshots combined = synthesize_combined(cfg, emitter, 0.0, 16, 1);
  const CombinedEstimate rm = root_music_plus_max_rp_qi(combined.right, combined.left, cfg);
  const double rm_err = std::abs(rm.angle * kDegPerRad - 41.0);

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const double sector_deg = containing_sector_deg(41.0, 128);
  const bool maxrp_ok = std::abs(maxrp_deg - sector_deg) <= 1e-12;
  const bool qi_ok = std::abs(qi_deg - 41.0) <= 0.3;
  const bool rm_ok = rm_err <= 1e-4 && !rm.low_confidence;
  const bool time_ok = elapsed < 1.0;

  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "MaxRP=%.6f deg (sector %.6f), QI=%.6f deg, RM+QI err=%.3g deg, %.2f s",
                maxrp_deg, sector_deg, qi_deg, rm_err, elapsed);
  detail = buf;
  return maxrp_ok && qi_ok && rm_ok && time_ok;
}

// --- criterion 2: power-profile peak-sector rate --------------------------

bool criterion2(std::string& detail) {
  const ArrayConfig cfg = paper_cfg(32);
  const Eigen::VectorXd sectors = sector_centers(128);
  const int n_trials = 100;
  bool pass = true;
  std::ostringstream out;

  std::uint64_t counter = 0;
  for (double theta0 : {41.0, 61.0}) {
    Emitter emitter;
    emitter.angle = theta0 / kDegPerRad;
    const double target = containing_sector_deg(theta0, 128);
    for (double snr : {0.0, 5.0, 10.0}) {
      const double noise_var = std::pow(10.0, -snr / 10.0);
      int hits = 0;
      for (int t = 0; t < n_trials; ++t) {
        const SnapshotMatrix slot = synthesize_snapshots(
            cfg, emitter, noise_var, 100, derive_seed(2, counter++), sectors);
        const double peak = max_rp(power_profile(slot, sectors)) * kDegPerRad;
        if (std::abs(peak - target) <= 1e-9) ++hits;
      }
      out << " theta0=" << theta0 << " snr=" << snr << ": " << hits << "/100;";
      if (snr >= 5.0 && hits < 95) pass = false;
    }
  }
  detail = out.str();
  return pass;
}

// --- criterion 3: RMSE ordering and high-SNR gap ---------------------------

bool criterion3(std::string& detail) {
  ExperimentSpec spec;
  spec.cfg = paper_cfg(32);
  spec.snr_grid_db = {-10, -5, 0, 5, 10, 15, 20};
  spec.snapshot_grid = {100};
  spec.n_trials = 500;
  spec.master_seed = 3;
  const auto rows = run_experiment(spec, hw_threads());

  bool order_ok = true;
  std::ostringstream out;
  for (double snr : {0.0, 5.0, 10.0, 15.0, 20.0}) {
    const double rp = find_row(rows, Method::MaxRP, snr, 100, 32).rmse_deg;
    const double qi = find_row(rows, Method::MaxRPQI, snr, 100, 32).rmse_deg;
    const double rm = find_row(rows, Method::RootMusicPlusMaxRPQI, snr, 100, 32).rmse_deg;
    if (!(rm <= qi && qi <= rp)) order_ok = false;
    out << " snr=" << snr << ": " << rm << "<=" << qi << "<=" << rp << ";";
  }

  const double rp20 = find_row(rows, Method::MaxRP, 20.0, 100, 32).rmse_deg;
  const double rm20 = find_row(rows, Method::RootMusicPlusMaxRPQI, 20.0, 100, 32).rmse_deg;
  const double gap_db = 20.0 * std::log10(rp20 / rm20);
  const bool gap_ok = gap_db >= 2.0 && gap_db <= 6.0;
  out << " gap@20dB=" << gap_db << " dB (need [2,6])";
  detail = (order_ok ? std::string("ordering ok;") : std::string("ordering violated;")) +
           out.str();
  return order_ok && gap_ok;
}

// --- criterion 4: CRLB attainment ------------------------------------------

bool criterion4(std::string& detail) {
  ExperimentSpec spec;
  spec.cfg = paper_cfg(32);
  spec.snr_grid_db = {10, 15, 20};
  spec.snapshot_grid = {100};
  spec.left_subarray_grid = {8, 32};
  spec.n_trials = 500;
  spec.master_seed = 4;
  spec.methods = {Method::RootMusicPlusMaxRPQI};
  const auto rows = run_experiment(spec, hw_threads());

  bool within_sqrt2 = true;
  bool gap_wider_at_8 = true;
  std::ostringstream out;
  for (double snr : {10.0, 15.0, 20.0}) {
    const RmseRow& r32 = find_row(rows, Method::RootMusicPlusMaxRPQI, snr, 100, 32);
    const RmseRow& r8 = find_row(rows, Method::RootMusicPlusMaxRPQI, snr, 100, 8);
    const double ratio32 = r32.rmse_deg / r32.crlb_deg;
    const double ratio8 = r8.rmse_deg / r8.crlb_deg;
    if (ratio32 > std::sqrt(2.0)) within_sqrt2 = false;
    if (!(ratio8 > ratio32)) gap_wider_at_8 = false;
    out << " snr=" << snr << ": rmse/crlb K_L=32 " << ratio32 << ", K_L=8 "
        << ratio8 << ";";
  }
  out << (within_sqrt2 ? " sqrt2 clause ok" : " sqrt2 clause violated");
  out << (gap_wider_at_8 ? "; K_L=8 gap larger ok" : "; K_L=8 gap clause violated");
  detail = out.str();
  return within_sqrt2 && gap_wider_at_8;
}

// --- criterion 5: snapshot scaling ------------------------------------------

bool criterion5(std::string& detail) {
  ExperimentSpec spec;
  spec.cfg = paper_cfg(32);
  spec.snr_grid_db = {10};
  spec.snapshot_grid = {50, 100, 200, 400};
  spec.n_trials = 500;
  spec.master_seed = 5;
  spec.methods = {Method::RootMusicPlusMaxRPQI};
  const auto rows = run_experiment(spec, hw_threads());

  std::vector<double> rmse;
  std::ostringstream out;
  for (int l : {50, 100, 200, 400}) {
    rmse.push_back(find_row(rows, Method::RootMusicPlusMaxRPQI, 10.0, l, 32).rmse_deg);
    out << " L=" << l << ": " << rmse.back() << ";";
  }
  bool pass = rmse.back() < rmse.front();
  for (std::size_t i = 1; i < rmse.size(); ++i)
    if (!(rmse[i] < rmse[i - 1] * 1.05)) pass = false;  // monotone, 5% slack
  detail = out.str();
  return pass;
}

// --- criterion 6: complexity formulas ---------------------------------------

bool criterion6(std::string& detail) {
  struct Point {
    int n, m, k, l;
    double maxrp, maxrpqi, rmqi, tlhad;
  };
  // Exact values from independent big-integer evaluation of the four formulas.
  const Point points[] = {
      {1024, 8, 128, 100, 31998976, 32730880, 123879408, 320615360},
      {1024, 8, 128, 50, 7998976, 8730880, 100134408, 294394560},
      {1024, 8, 128, 200, 127998976, 128730880, 218859408, 373056960},
      {1024, 8, 128, 400, 511998976, 512730880, 598779408, 477940160},
      {2048, 8, 256, 100, 63997952, 69721600, 1517465072, 2356163520},
      {4096, 8, 512, 100, 127995904, 173259776, 23212231152, 18014548928},
      {8192, 8, 1024, 100, 255991808, 616003584, 368187687408, 140777632704},
      {256, 8, 32, 100, 7999744, 8012736, 8050032, 7467968},
      {512, 8, 64, 100, 15999488, 16095104, 21588208, 46609344},
      {1024, 16, 64, 100, 31358976, 31454592, 36631296, 320657152},
      {1024, 8, 128, 1, 2176, 734080, 92222574, 268698176},
      {64, 8, 8, 10, 19936, 20240, 18888, 86720},
  };
  bool exact_ok = true;
  for (const Point& p : points) {
    ArrayConfig cfg;
    cfg.n_antennas = p.n;
    cfg.subarray_size = p.m;
    cfg.n_subarrays = p.k;
    if (flops(Method::MaxRP, cfg, p.l) != p.maxrp) exact_ok = false;
    if (flops(Method::MaxRPQI, cfg, p.l) != p.maxrpqi) exact_ok = false;
    if (flops(Method::RootMusicPlusMaxRPQI, cfg, p.l) != p.rmqi) exact_ok = false;
    if (flops(Method::TLHAD, cfg, p.l) != p.tlhad) exact_ok = false;
  }

  bool ordering_ok = true;
  std::ostringstream out;
  out << (exact_ok ? "12-point exact match ok;" : "exact match violated;");
  for (int n : {1024, 2048, 4096, 8192}) {
    ArrayConfig cfg;
    cfg.n_antennas = n;
    cfg.subarray_size = 8;
    cfg.n_subarrays = n / 8;
    const double t = flops(Method::TLHAD, cfg, 100);
    for (Method m : {Method::MaxRP, Method::MaxRPQI, Method::RootMusicPlusMaxRPQI}) {
      if (!(flops(m, cfg, 100) < t)) {
        ordering_ok = false;
        out << " " << method_name(m) << ">=TLHAD at N=" << n << ";";
      }
    }
  }
  if (ordering_ok) out << " proposed<TLHAD at all N ok";
  detail = out.str();
  return exact_ok && ordering_ok;
}

// --- criterion 7: invariant suite --------------------------------------------

bool criterion7(std::string& detail) {
  int failing = 0;
  std::ostringstream out;
  auto report = [&](const char* name, int bad, int cases) {
    out << " " << name << ": " << (cases - bad) << "/" << cases << ";";
    if (bad > 0) ++failing;
  };

  ArrayConfig cfg;
  cfg.subarray_size = 8;
  cfg.n_subarrays = 16;
  cfg.n_antennas = 128;
  cfg.left_subarrays = 4;
  const Eigen::VectorXd sectors = sector_centers(12);

  // Phase and positive-scale invariance of all three estimators.
  {
    int bad_phase = 0, bad_scale = 0;
    GaussianRng rng(70);
    for (int t = 0; t < 100; ++t) {
      Emitter e;
      e.angle = kPi * (0.1 + 0.8 * rng.uniform());
      const CombinedSnapshots slot =
          synthesize_combined(cfg, e, 0.2 + rng.uniform(), 64, 7000 + t);
      const std::complex<double> rotor =
          std::polar(1.0, 2.0 * kPi * rng.uniform());
      const double scale = 0.25 + 3.0 * rng.uniform();

      const PowerProfile p0 = power_profile(slot.right, sectors);
      SnapshotMatrix rot = slot.right;
      rot.data *= rotor;
      SnapshotMatrix scl = slot.right;
      scl.data *= scale;
      const CombinedEstimate c0 = root_music_plus_max_rp_qi(slot.right, slot.left, cfg);
      const CombinedEstimate cr =
          root_music_plus_max_rp_qi(rot, slot.left * rotor, cfg);
      const CombinedEstimate cs =
          root_music_plus_max_rp_qi(scl, slot.left * scale, cfg);
      if (max_rp(p0) != max_rp(power_profile(rot, sectors)) ||
          std::abs(max_rp_qi(p0).angle - max_rp_qi(power_profile(rot, sectors)).angle) > 1e-9 ||
          c0.low_confidence != cr.low_confidence ||
          (!c0.low_confidence && std::abs(c0.angle - cr.angle) > 1e-9))
        ++bad_phase;
      if (max_rp(p0) != max_rp(power_profile(scl, sectors)) ||
          std::abs(max_rp_qi(p0).angle - max_rp_qi(power_profile(scl, sectors)).angle) > 1e-9 ||
          c0.low_confidence != cs.low_confidence ||
          (!c0.low_confidence && std::abs(c0.angle - cs.angle) > 1e-9))
        ++bad_scale;
    }
    report("phase-invariance", bad_phase, 100);
    report("scale-invariance", bad_scale, 100);
  }

  // QI vertex stays inside its three-point bracket.
  {
    int bad = 0;
    GaussianRng rng(71);
    for (int t = 0; t < 100; ++t) {
      const double tk = 0.3 + 2.4 * rng.uniform();
      const double h = 0.01 + 0.1 * rng.uniform();
      PowerProfile p;
      p.sector_angles.resize(3);
      p.sector_angles << tk - h, tk, tk + h;
      p.powers.resize(3);
      const double pk = 1.0 + rng.uniform();
      p.powers << std::max(0.0, pk - 1e-3 - rng.uniform()), pk,
          std::max(0.0, pk - 1e-3 - rng.uniform());
      const QiEstimate est = quadratic_interp(p, 1);
      if (est.degenerate || est.angle < tk - h - 1e-12 || est.angle > tk + h + 1e-12)
        ++bad;
    }
    report("qi-vertex-in-bracket", bad, 100);
  }

  // Conjugate-reciprocal pairing of the MUSIC polynomial roots.
  {
    int bad = 0;
    GaussianRng rng(72);
    for (int t = 0; t < 100; ++t) {
      const int q = 4 + static_cast<int>(rng.uniform() * 5);
      Eigen::VectorXcd u(q);
      for (int i = 0; i < q; ++i) u(i) = rng.complex_normal(1.0);
      u.normalize();
      const Eigen::MatrixXcd projector =
          Eigen::MatrixXcd::Identity(q, q) - u * u.adjoint();
      Eigen::VectorXcd coeffs(2 * q - 1);
      for (int d = -(q - 1); d <= q - 1; ++d)
        coeffs(d + q - 1) = projector.diagonal(d).sum();
      const Eigen::VectorXcd roots = poly_roots(coeffs);
      for (int i = 0; i < roots.size(); ++i) {
        const std::complex<double> mirror = 1.0 / std::conj(roots(i));
        double best = 1e300;
        for (int j = 0; j < roots.size(); ++j)
          best = std::min(best, std::abs(roots(j) - mirror));
        if (best > 1e-6 * std::max(1.0, std::abs(mirror))) ++bad;
      }
    }
    report("conjugate-reciprocal-roots", bad, 100);
  }

  // Alias-set closure of the candidate family.
  {
    int bad = 0, cases = 0;
    GaussianRng rng(73);
    ArrayConfig acfg = cfg;
    acfg.left_subarrays = 8;
    acfg.n_subarrays = 16;
    acfg.n_antennas = 128;
    while (cases < 100) {
      const double theta0 = kPi * (0.05 + 0.90 * rng.uniform());
      if (std::abs(g_factor(acfg, theta0)) < 0.3) continue;
      const Eigen::VectorXcd aq = virtual_manifold(acfg, theta0);
      const Eigen::MatrixXcd r =
          (std::norm(g_factor(acfg, theta0)) / 8.0) * (aq * aq.adjoint()) +
          1e-4 * Eigen::MatrixXcd::Identity(8, 8);
      const CandidateSet cands =
          root_music_candidates_from_covariance(HermitianMatrix(r), acfg, 200);
      bool ok = !cands.no_signal && !cands.angles.empty();
      double nearest = 1e9;
      for (double a : cands.angles) {
        const double diff = 4.0 * (std::sin(a) - std::sin(theta0));
        if (std::abs(diff - std::round(diff)) > 1e-5) ok = false;
        nearest = std::min(nearest, std::abs(a - theta0));
      }
      if (!ok || nearest > 1e-6) ++bad;
      ++cases;
    }
    report("alias-set-closure", bad, 100);
  }

  // EVD reconstruction / orthonormality and covariance PSD.
  {
    int bad_evd = 0, bad_psd = 0;
    GaussianRng rng(74);
    for (int t = 0; t < 100; ++t) {
      const int n = 2 + static_cast<int>(rng.uniform() * 7);
      const int l = 1 + static_cast<int>(rng.uniform() * 12);
      Eigen::MatrixXcd x(n, l);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < l; ++j) x(i, j) = rng.complex_normal(1.0);
      const HermitianMatrix r = sample_covariance(x);
      const EigenPair ep = hermitian_evd(r);
      const double scale = std::max(1.0, r.matrix().cwiseAbs().maxCoeff());
      const Eigen::MatrixXcd recon =
          ep.vectors * ep.values.asDiagonal() * ep.vectors.adjoint();
      if ((recon - r.matrix()).cwiseAbs().maxCoeff() > 1e-10 * scale ||
          (ep.vectors.adjoint() * ep.vectors - Eigen::MatrixXcd::Identity(n, n))
                  .cwiseAbs()
                  .maxCoeff() > 1e-10)
        ++bad_evd;
      if (ep.values(n - 1) < -1e-10 * std::max(1.0, ep.values(0))) ++bad_psd;
    }
    report("evd-reconstruction", bad_evd, 100);
    report("covariance-psd", bad_psd, 100);
  }

  // Polynomial root round trip.
  {
    int bad = 0;
    GaussianRng rng(75);
    for (int t = 0; t < 100; ++t) {
      const int degree = 2 + static_cast<int>(rng.uniform() * 15);
      std::vector<std::complex<double>> roots;
      while (static_cast<int>(roots.size()) < degree) {
        const std::complex<double> cand =
            std::polar(0.5 + 1.5 * rng.uniform(), 2.0 * kPi * rng.uniform());
        bool ok = true;
        for (const auto& r : roots)
          if (std::abs(r - cand) < 0.05) ok = false;
        if (ok) roots.push_back(cand);
      }
      std::vector<std::complex<double>> c = {1.0};
      for (const auto& r : roots) {
        std::vector<std::complex<double>> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
          next[i + 1] += c[i];
          next[i] -= r * c[i];
        }
        c = next;
      }
      Eigen::VectorXcd coeffs(static_cast<int>(c.size()));
      for (std::size_t i = 0; i < c.size(); ++i) coeffs(static_cast<int>(i)) = c[i];
      const Eigen::VectorXcd computed = poly_roots(coeffs);
      for (const auto& r : roots) {
        double best = 1e300;
        for (int i = 0; i < computed.size(); ++i)
          best = std::min(best, std::abs(computed(i) - r));
        if (best > 1e-8) ++bad;
      }
    }
    report("poly-root-round-trip", bad, 100);
  }

  detail = out.str();
  return failing == 0;
}

// --- criterion 8: determinism --------------------------------------------

bool criterion8(std::string& detail) {
  ExperimentSpec spec;
  spec.cfg = paper_cfg(32);
  spec.snr_grid_db = {0, 10};
  spec.snapshot_grid = {50};
  spec.n_trials = 20;
  spec.master_seed = 8;

  auto render = [&](int threads) {
    std::ostringstream out;
    write_rmse_csv(run_experiment(spec, threads), spec, out);
    return out.str();
  };
  const std::string base = render(1);
  bool pass = render(1) == base && render(4) == base && render(7) == base &&
              render(hw_threads()) == base;

  std::ostringstream p1, p2, c1, c2;
  ExperimentSpec small = spec;
  small.cfg.n_subarrays = 16;
  small.cfg.n_antennas = 128;
  small.cfg.left_subarrays = 4;
  small.n_trials = 5;
  emit_power_profile(small, p1);
  emit_power_profile(small, p2);
  emit_crlb_table(small, c1);
  emit_crlb_table(small, c2);
  pass = pass && p1.str() == p2.str() && c1.str() == c2.str();

  detail = pass ? "byte-identical csv across repeats and thread counts 1/4/7/hw"
                : "csv differs between runs or thread counts";
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  int criterion = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      criterion = std::atoi(argv[++i]);
    }
  }
  if (criterion < 1 || criterion > 8) {
    std::fprintf(stderr, "usage: acceptance --criterion <1..8>\n");
    return 2;
  }

  using Fn = bool (*)(std::string&);
  const Fn fns[8] = {criterion1, criterion2, criterion3, criterion4,
                     criterion5, criterion6, criterion7, criterion8};

  std::string detail;
  bool pass = false;
  try {
    pass = fns[criterion - 1](detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  std::printf("CRITERION %d: %s —%s%s\n", criterion, pass ? "PASS" : "FAIL",
              detail.empty() || detail[0] == ' ' ? "" : " ", detail.c_str());
  return pass ? 0 : 1;
}
