#include "doa/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace doa {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDedupTol = 1e-9;
}  // namespace

void PowerProfile::validate() const {
  const Eigen::Index n = sector_angles.size();
  if (n == 0 || powers.size() != n)
    throw std::invalid_argument("profile angle/power lengths must match and be nonzero");
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(sector_angles(k) > 0.0 && sector_angles(k) < kPi))
      throw std::invalid_argument("sector angles must lie in (0, pi)");
    if (k > 0 && !(sector_angles(k) > sector_angles(k - 1)))
      throw std::invalid_argument("sector angles must be strictly increasing");
    if (powers(k) < 0.0)
      throw std::invalid_argument("powers must be nonnegative");
  }
}

PowerProfile power_profile(const SnapshotMatrix& snapshots,
                           const Eigen::VectorXd& sector_angles) {
  if (snapshots.data.rows() != sector_angles.size())
    throw std::invalid_argument("one sector angle per snapshot row required");
  if (snapshots.data.cols() == 0)
    throw std::invalid_argument("need at least one snapshot");
  PowerProfile profile;
  profile.sector_angles = sector_angles;
  profile.powers =
      snapshots.data.cwiseAbs2().rowwise().mean();
  profile.validate();
  return profile;
}

double max_rp(const PowerProfile& profile) {
  profile.validate();
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < profile.powers.size(); ++k)
    if (profile.powers(k) > profile.powers(best)) best = k;
  return profile.sector_angles(best);
}

QiEstimate quadratic_interp(const PowerProfile& profile, int k_star) {
  profile.validate();
  const Eigen::Index n = profile.sector_angles.size();
  if (k_star < 0 || k_star >= n)
    throw std::invalid_argument("k_star out of range");
  const double tk = profile.sector_angles(k_star);
  const double pk = profile.powers(k_star);

  double tm, pm, tp, pp;
  if (k_star == 0) {
    // Mirror the right neighbor across the edge sector.
    tp = profile.sector_angles(1);
    pp = profile.powers(1);
    tm = 2.0 * tk - tp;
    pm = pp;
  } else if (k_star == n - 1) {
    tm = profile.sector_angles(n - 2);
    pm = profile.powers(n - 2);
    tp = 2.0 * tk - tm;
    pp = pm;
  } else {
    tm = profile.sector_angles(k_star - 1);
    pm = profile.powers(k_star - 1);
    tp = profile.sector_angles(k_star + 1);
    pp = profile.powers(k_star + 1);
  }

  // Vertex of the parabola through (tm,pm), (tk,pk), (tp,pp). For ascending
  // abscissas the fit is concave iff den > 0.
  const double den = (tk - tm) * (pk - pp) - (tk - tp) * (pk - pm);
  if (!(den > 1e-300)) return {tk, true};
  const double num =
      (tk - tm) * (tk - tm) * (pk - pp) - (tk - tp) * (tk - tp) * (pk - pm);
  return {tk - 0.5 * num / den, false};
}

QiEstimate max_rp_qi(const PowerProfile& profile) {
  profile.validate();
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < profile.powers.size(); ++k)
    if (profile.powers(k) > profile.powers(best)) best = k;
  return quadratic_interp(profile, static_cast<int>(best));
}

CandidateSet root_music_candidates_from_covariance(const HermitianMatrix& covariance,
                                                   const ArrayConfig& cfg,
                                                   int n_snapshots) {
  cfg.validate(true);
  const int q_size = cfg.left_subarrays;
  if (covariance.order() != q_size)
    throw std::invalid_argument("covariance order must equal left_subarrays");
  if (n_snapshots < 1) throw std::invalid_argument("need at least one snapshot");

  const EigenPair eig = hermitian_evd(covariance);

  // Finite-sample signal-presence test against the Marchenko-Pastur edge of
  // a pure-noise sample covariance.
  const double mean_rest =
      eig.values.tail(q_size - 1).sum() / static_cast<double>(q_size - 1);
  if (mean_rest > 1e-12 * std::abs(eig.values(0))) {
    const double edge = 1.0 + std::sqrt(static_cast<double>(q_size) / n_snapshots);
    const double threshold = edge * edge + 3.0 / std::sqrt(static_cast<double>(n_snapshots));
    if (eig.values(0) < threshold * mean_rest) return {.angles = {}, .no_signal = true};
  }

  // Noise projector; with one source this is I minus the signal projector.
  const Eigen::VectorXcd signal = eig.vectors.col(0);
  const Eigen::MatrixXcd projector =
      Eigen::MatrixXcd::Identity(q_size, q_size) - signal * signal.adjoint();

  // f(z) * z^(Q-1) has coefficient sum-of-diagonal-d at power d + Q - 1.
  Eigen::VectorXcd coeffs(2 * q_size - 1);
  for (int d = -(q_size - 1); d <= q_size - 1; ++d)
    coeffs(d + q_size - 1) = projector.diagonal(d).sum();

  const Eigen::VectorXcd roots = poly_roots(coeffs);

  // With a single source, keep the root nearest the unit circle. No
  // inside-only filter: roots come in conjugate-reciprocal pairs sharing one
  // argument, and a numerically split double root can land with both images
  // marginally outside the circle.
  std::complex<double> best_root = 0.0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < roots.size(); ++r) {
    const double dist = std::abs(1.0 - std::abs(roots(r)));
    if (dist < best_dist) {
      best_dist = dist;
      best_root = roots(r);
    }
  }
  if (!(best_dist <= 0.5)) return {.angles = {}, .no_signal = true};

  // Alias expansion: arg(z) pins sin(theta) only modulo 1/(M d/lambda), and
  // each spatial frequency maps to two angles in (0, pi).
  const double step = cfg.subarray_size * cfg.spacing_wavelengths;
  const double w0 = std::arg(best_root);
  CandidateSet out;
  const int m_lo = static_cast<int>(std::floor(-w0 / kTwoPi)) - 1;
  const int m_hi = static_cast<int>(std::ceil(step - w0 / kTwoPi)) + 1;
  for (int m = m_lo; m <= m_hi; ++m) {
    const double u = (w0 + kTwoPi * m) / (kTwoPi * step);
    if (!(u > 1e-12 && u < 1.0 - 1e-12)) continue;
    const double base = std::asin(u);
    out.angles.push_back(base);
    out.angles.push_back(kPi - base);
  }
  std::sort(out.angles.begin(), out.angles.end());
  out.angles.erase(std::unique(out.angles.begin(), out.angles.end(),
                               [](double a, double b) { return std::abs(a - b) < kDedupTol; }),
                   out.angles.end());
  return out;
}

CandidateSet root_music_candidates(const Eigen::MatrixXcd& left_snapshots,
                                   const ArrayConfig& cfg) {
  return root_music_candidates_from_covariance(
      sample_covariance(left_snapshots), cfg,
      static_cast<int>(left_snapshots.cols()));
}

CombinedEstimate disambiguate(const CandidateSet& candidates, double reference) {
  if (candidates.angles.empty()) return {reference, true};
  double best = candidates.angles.front();
  double best_dist = std::numeric_limits<double>::infinity();
  for (double angle : candidates.angles) {
    const double d = (angle - reference) * (angle - reference);
    if (d < best_dist) {  // strict: ties keep the smaller angle
      best_dist = d;
      best = angle;
    }
  }
  return {best, false};
}

CombinedEstimate root_music_plus_max_rp_qi(const SnapshotMatrix& right_snapshots,
                                           const Eigen::MatrixXcd& left_snapshots,
                                           const ArrayConfig& cfg) {
  cfg.validate(true);
  const int right_count = cfg.n_subarrays - cfg.left_subarrays;
  if (right_snapshots.data.rows() != right_count)
    throw std::invalid_argument("right part must hold K - Q subarray rows");

  const PowerProfile profile =
      power_profile(right_snapshots, sector_centers(right_count));
  const double reference = max_rp_qi(profile).angle;

  const CandidateSet candidates = root_music_candidates(left_snapshots, cfg);
  CombinedEstimate est = disambiguate(candidates, reference);
  est.low_confidence = est.low_confidence || candidates.no_signal;
  return est;
}

}  // namespace doa
