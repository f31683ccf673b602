#include "doa/array_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doa/rng.hpp"

namespace doa {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_angle(double angle) {
  if (!(angle > 0.0 && angle < kPi))
    throw std::invalid_argument("angle must lie in the open interval (0, pi)");
}
}  // namespace

void ArrayConfig::validate(bool require_root_music) const {
  if (n_antennas <= 0 || subarray_size <= 0 || n_subarrays <= 0)
    throw std::invalid_argument("array dimensions must be positive");
  if (n_antennas != n_subarrays * subarray_size)
    throw std::invalid_argument("n_antennas must equal n_subarrays * subarray_size");
  if (!(spacing_wavelengths > 0.0))
    throw std::invalid_argument("spacing_wavelengths must be positive");
  if (left_subarrays < 0 || left_subarrays > n_subarrays)
    throw std::invalid_argument("left_subarrays out of range");
  if (require_root_music && (left_subarrays < 2 || left_subarrays >= n_subarrays))
    throw std::invalid_argument(
        "Root-MUSIC stage needs 2 <= left_subarrays < n_subarrays");
}

void Emitter::validate() const {
  check_angle(angle);
  if (power < 0.0) throw std::invalid_argument("emitter power must be nonnegative");
}

Eigen::VectorXd sector_centers(int count) {
  if (count <= 0) throw std::invalid_argument("sector count must be positive");
  Eigen::VectorXd centers(count);
  for (int k = 1; k <= count; ++k)
    centers(k - 1) = (2.0 * k - 1.0) * kPi / (2.0 * count);
  return centers;
}

std::complex<double> dirichlet_sum(int m, double x) {
  // Ratio form of sum_{i=0}^{m-1} e^{j 2 pi i x}, exact-limit branch at the
  // removable singularity.
  // The sum has period 1 in x, and reducing first keeps the sin arguments
  // small so no precision is lost for large or near-integer x.
  const double frac = x - std::round(x);
  if (std::abs(frac) < 1e-12) return {static_cast<double>(m), 0.0};
  const double ratio = std::sin(kPi * m * frac) / std::sin(kPi * frac);
  const double phase = kPi * (m - 1.0) * frac;
  return ratio * std::complex<double>(std::cos(phase), std::sin(phase));
}

Eigen::VectorXcd steering_vector(const ArrayConfig& cfg, int k, double angle) {
  cfg.validate();
  check_angle(angle);
  if (k < 1 || k > cfg.n_subarrays)
    throw std::invalid_argument("subarray index out of range");
  const int m_size = cfg.subarray_size;
  const double u = std::cos(angle);
  const double dl = cfg.spacing_wavelengths;
  const double psi_k = (k - 1 - cfg.n_subarrays / 2.0) * m_size * dl * u;
  Eigen::VectorXcd a(m_size);
  for (int m = 1; m <= m_size; ++m) {
    const double psi_m = (m - m_size / 2.0) * dl * u;
    a(m - 1) = std::polar(1.0, kTwoPi * (psi_k + psi_m));
  }
  return a;
}

Eigen::VectorXcd analog_weights(const ArrayConfig& cfg, int k, double sector_angle) {
  cfg.validate();
  check_angle(sector_angle);
  if (k < 1 || k > cfg.n_subarrays)
    throw std::invalid_argument("subarray index out of range");
  const int m_size = cfg.subarray_size;
  const double u = std::cos(sector_angle);
  const double dl = cfg.spacing_wavelengths;
  const double scale = 1.0 / std::sqrt(static_cast<double>(m_size));
  Eigen::VectorXcd v(m_size);
  for (int m = 1; m <= m_size; ++m) {
    const double psi_m = (m - m_size / 2.0) * dl * u;
    // Conjugated in w^H y, so the positive sign makes w^H a(sector) coherent.
    v(m - 1) = scale * std::polar(1.0, kTwoPi * psi_m);
  }
  return v;
}

std::complex<double> gamma_kernel(const ArrayConfig& cfg, double sector_angle,
                                  double source_angle) {
  cfg.validate();
  check_angle(sector_angle);
  check_angle(source_angle);
  const double delta_u = std::cos(source_angle) - std::cos(sector_angle);
  return dirichlet_sum(cfg.subarray_size, cfg.spacing_wavelengths * delta_u);
}

std::complex<double> g_factor(const ArrayConfig& cfg, double angle) {
  cfg.validate();
  check_angle(angle);
  return dirichlet_sum(cfg.subarray_size, cfg.spacing_wavelengths * std::sin(angle));
}

Eigen::VectorXcd virtual_manifold(const ArrayConfig& cfg, double angle) {
  cfg.validate(true);
  check_angle(angle);
  const int q_size = cfg.left_subarrays;
  const double step =
      cfg.subarray_size * cfg.spacing_wavelengths * std::sin(angle);
  Eigen::VectorXcd a(q_size);
  for (int q = 0; q < q_size; ++q) a(q) = std::polar(1.0, kTwoPi * q * step);
  return a;
}

SnapshotMatrix synthesize_snapshots(const ArrayConfig& cfg, const Emitter& emitter,
                                    double noise_variance, int n_snapshots,
                                    std::uint64_t seed,
                                    const Eigen::VectorXd& sector_angles) {
  cfg.validate();
  emitter.validate();
  if (n_snapshots < 1) throw std::invalid_argument("need at least one snapshot");
  if (noise_variance < 0.0) throw std::invalid_argument("noise variance must be >= 0");
  const int rows = static_cast<int>(sector_angles.size());
  if (rows != cfg.n_subarrays)
    throw std::invalid_argument("sector_angles length must equal n_subarrays");

  Eigen::VectorXcd gain(rows);
  const double norm = 1.0 / std::sqrt(static_cast<double>(cfg.subarray_size));
  for (int k = 0; k < rows; ++k)
    gain(k) = norm * gamma_kernel(cfg, sector_angles(k), emitter.angle);

  GaussianRng rng(seed);
  SnapshotMatrix out;
  out.noise_variance = noise_variance;
  out.data.resize(rows, n_snapshots);
  for (int l = 0; l < n_snapshots; ++l) {
    const std::complex<double> s = rng.complex_normal(emitter.power);
    for (int k = 0; k < rows; ++k)
      out.data(k, l) = gain(k) * s + rng.complex_normal(noise_variance);
  }
  return out;
}

CombinedSnapshots synthesize_combined(const ArrayConfig& cfg, const Emitter& emitter,
                                      double noise_variance, int n_snapshots,
                                      std::uint64_t seed) {
  cfg.validate(true);
  emitter.validate();
  if (n_snapshots < 1) throw std::invalid_argument("need at least one snapshot");
  if (noise_variance < 0.0) throw std::invalid_argument("noise variance must be >= 0");

  const int q_size = cfg.left_subarrays;
  const int right_count = cfg.n_subarrays - q_size;
  if (right_count < 3)
    throw std::invalid_argument("right part needs at least 3 subarrays");

  const double norm = 1.0 / std::sqrt(static_cast<double>(cfg.subarray_size));
  const Eigen::VectorXcd manifold =
      norm * g_factor(cfg, emitter.angle) * virtual_manifold(cfg, emitter.angle);

  const Eigen::VectorXd right_sectors = sector_centers(right_count);
  Eigen::VectorXcd right_gain(right_count);
  for (int k = 0; k < right_count; ++k)
    right_gain(k) = norm * gamma_kernel(cfg, right_sectors(k), emitter.angle);

  GaussianRng rng(seed);
  CombinedSnapshots out;
  out.left.resize(q_size, n_snapshots);
  out.right.noise_variance = noise_variance;
  out.right.data.resize(right_count, n_snapshots);
  for (int l = 0; l < n_snapshots; ++l) {
    const std::complex<double> s = rng.complex_normal(emitter.power);
    for (int q = 0; q < q_size; ++q)
      out.left(q, l) = manifold(q) * s + rng.complex_normal(noise_variance);
    for (int k = 0; k < right_count; ++k)
      out.right.data(k, l) = right_gain(k) * s + rng.complex_normal(noise_variance);
  }
  return out;
}

}  // namespace doa
