#include "doa/crlb.hpp"

#include <cmath>
#include <stdexcept>

namespace doa {

const char* method_name(Method method) {
  switch (method) {
    case Method::MaxRP: return "MaxRP";
    case Method::MaxRPQI: return "MaxRPQI";
    case Method::RootMusicPlusMaxRPQI: return "RootMusicPlusMaxRPQI";
    case Method::TLHAD: return "TLHAD";
  }
  throw std::invalid_argument("unknown method");
}

Eigen::VectorXcd chain_response(const ArrayConfig& cfg, double angle,
                                const Eigen::VectorXd& sector_angles) {
  cfg.validate();
  const int q_size = cfg.left_subarrays;
  const int right_count = static_cast<int>(sector_angles.size());
  const double norm = 1.0 / std::sqrt(static_cast<double>(cfg.subarray_size));

  Eigen::VectorXcd mu(q_size + right_count);
  if (q_size > 0) {
    mu.head(q_size) = norm * g_factor(cfg, angle) * virtual_manifold(cfg, angle);
  }
  for (int k = 0; k < right_count; ++k)
    mu(q_size + k) = norm * gamma_kernel(cfg, sector_angles(k), angle);
  return mu;
}

CrlbPoint hybrid_crlb(const ArrayConfig& cfg, const Emitter& emitter,
                      double noise_variance, int n_snapshots,
                      const Eigen::VectorXd& sector_angles) {
  cfg.validate();
  emitter.validate();
  if (!(noise_variance > 0.0))
    throw std::invalid_argument("hybrid_crlb: noise variance must be positive");
  if (n_snapshots < 1) throw std::invalid_argument("need at least one snapshot");

  const double theta = emitter.angle;
  const double h = 1e-6;
  auto central = [&](double step) -> Eigen::VectorXcd {
    return (chain_response(cfg, theta + step, sector_angles) -
            chain_response(cfg, theta - step, sector_angles)) /
           (2.0 * step);
  };
  // One level of Richardson extrapolation on the central difference.
  const Eigen::VectorXcd d_full = central(h);
  const Eigen::VectorXcd d_half = central(h / 2.0);
  const Eigen::VectorXcd deriv = (4.0 * d_half - d_full) / 3.0;
  if (!deriv.allFinite())
    throw std::runtime_error("hybrid_crlb: non-finite derivative");

  const double fisher = 2.0 * n_snapshots * emitter.power / noise_variance *
                        deriv.squaredNorm();
  if (!(fisher > 0.0))
    throw std::runtime_error("hybrid_crlb: degenerate Fisher information");

  CrlbPoint point;
  point.snr_db = 10.0 * std::log10(emitter.power / noise_variance);
  point.n_snapshots = n_snapshots;
  point.crlb_deg = (180.0 / 3.14159265358979323846) / std::sqrt(fisher);
  return point;
}

double flops(Method method, const ArrayConfig& cfg, int n_snapshots) {
  cfg.validate();
  if (n_snapshots < 1) throw std::invalid_argument("need at least one snapshot");
  const double m = cfg.subarray_size;
  const double k = cfg.n_subarrays;
  const double n = cfg.n_antennas;
  const double l = n_snapshots;

  const double per_sector = 3.0 * m * l * l + l * l - m;
  const double qi_extra = (k * k * k + 6.0 * k * k + 2.0 * k) / 3.0;

  switch (method) {
    case Method::MaxRP:
      return k * per_sector;
    case Method::MaxRPQI:
      return k * per_sector + qi_extra;
    case Method::RootMusicPlusMaxRPQI:
      return (k - 2.0) * (per_sector + qi_extra) + m * m * m + 2.0 * m * l * l;
    case Method::TLHAD:
      return m * m * m + m * m * (2.0 * l - 1.0) + n * n * n / 4.0 +
             n * n / 4.0 * (2.0 * l - 1.0);
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace doa
