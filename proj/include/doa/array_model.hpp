#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace doa {

// Static geometry of the sub-connected hybrid ULA: N antennas split into
// K subarrays of M antennas each, one RF chain per subarray. left_subarrays
// (Q) is the number of subarrays reserved for the Root-MUSIC stage.
struct ArrayConfig {
  int n_antennas = 1024;          // N
  int subarray_size = 8;          // M
  int n_subarrays = 128;          // K
  double spacing_wavelengths = 0.5;  // d / lambda
  int left_subarrays = 0;         // Q

  // Throws std::invalid_argument on violation of N = K*M, Q range, d > 0.
  void validate(bool require_root_music = false) const;
};

// Single far-field narrowband emitter.
struct Emitter {
  double angle = 0.0;  // radians, open interval (0, pi)
  double power = 1.0;  // P_s, linear scale

  void validate() const;
};

// Complex baseband subarray outputs after analog combining: one row per
// subarray, one column per snapshot.
struct SnapshotMatrix {
  Eigen::MatrixXcd data;
  double noise_variance = 0.0;  // sigma_w^2
};

// Sector center angles (2k-1)*pi/(2*count), k = 1..count, covering (0, pi).
Eigen::VectorXd sector_centers(int count);

// Dirichlet phasor sum: sum_{i=0}^{m-1} exp(j*2*pi*i*x). Returns m at the
// removable singularity (x integer). |result| <= m always.
std::complex<double> dirichlet_sum(int m, double x);

// Array manifold of subarray k (1-based), element m = 1..M:
//   exp(j*2*pi*psi_k(angle)) * exp(j*2*pi*(m - M/2)*(d/lambda)*cos(angle)),
//   psi_k(angle) = (k - 1 - K/2) * M * (d/lambda) * cos(angle).
// Unit-modulus entries, Euclidean norm sqrt(M).
Eigen::VectorXcd steering_vector(const ArrayConfig& cfg, int k, double angle);

// Analog phase-shifter weights steering subarray k at sector_angle, each
// entry of modulus 1/sqrt(M). weights^H * steering_vector(same angle) has
// modulus sqrt(M); a request at broadside (cos = 0) yields (1/sqrt(M))*ones.
Eigen::VectorXcd analog_weights(const ArrayConfig& cfg, int k, double sector_angle);

// Combined response of one subarray steered at sector_angle to a source at
// source_angle, un-normalized (max modulus M at cos-coincidence):
//   gamma = [exp(j*2*pi*M*d/lambda*(cos(src)-cos(sec))) - 1]
//         / [exp(j*2*pi*d/lambda*(cos(src)-cos(sec))) - 1]
// with the removable singularity handled (returns M).
std::complex<double> gamma_kernel(const ArrayConfig& cfg, double sector_angle,
                                  double source_angle);

// Subarray-sum factor of the Root-MUSIC stage (all-ones weights):
//   g(theta) = sum_{m=1}^{M} exp(j*2*pi*(m-1)*(d/lambda)*sin(theta)).
std::complex<double> g_factor(const ArrayConfig& cfg, double angle);

// Virtual manifold across the Q left subarrays, element q = 0..Q-1:
//   exp(j*2*pi*q*M*(d/lambda)*sin(theta)). Unit-modulus entries.
Eigen::VectorXcd virtual_manifold(const ArrayConfig& cfg, double angle);

// One time-slot of subarray outputs with per-subarray analog steering:
// row k, column l = gamma_k/sqrt(M) * s(l) + w_k(l), where s(l) is circular
// complex Gaussian with variance emitter.power and w_k(l) has variance
// noise_variance (post-combining, 1/sqrt(M) weight normalization).
// Deterministic given seed.
SnapshotMatrix synthesize_snapshots(const ArrayConfig& cfg, const Emitter& emitter,
                                    double noise_variance, int n_snapshots,
                                    std::uint64_t seed,
                                    const Eigen::VectorXd& sector_angles);

// One time-slot of the two-part structure: the Q left subarrays carry
// all-ones analog weights, the remaining K-Q are steered to sector centers
// spanning (0, pi). Both parts observe the same signal waveform s(l).
struct CombinedSnapshots {
  Eigen::MatrixXcd left;  // Q x L
  SnapshotMatrix right;   // (K-Q) x L
};

CombinedSnapshots synthesize_combined(const ArrayConfig& cfg, const Emitter& emitter,
                                      double noise_variance, int n_snapshots,
                                      std::uint64_t seed);

}  // namespace doa
