#pragma once

#include <Eigen/Dense>

#include "doa/array_model.hpp"

namespace doa {

struct CrlbPoint {
  double snr_db = 0.0;
  int n_snapshots = 0;
  double crlb_deg = 0.0;  // root-CRLB in degrees
};

enum class Method { MaxRP, MaxRPQI, RootMusicPlusMaxRPQI, TLHAD };

const char* method_name(Method method);

// Noiseless stacked subarray-output mean direction (unit signal): Q left
// entries (all-ones weights) followed by one entry per steered right sector.
Eigen::VectorXcd chain_response(const ArrayConfig& cfg, double angle,
                                const Eigen::VectorXd& sector_angles);

// Numerical root-CRLB for the full hybrid chain, deterministic known-waveform
// model: I(theta) = (2 L P_s / sigma^2) * ||d mu/d theta||^2 with the
// derivative by Richardson-extrapolated central differences (base step 1e-6).
CrlbPoint hybrid_crlb(const ArrayConfig& cfg, const Emitter& emitter,
                      double noise_variance, int n_snapshots,
                      const Eigen::VectorXd& sector_angles);

// Closed-form FLOP counts of the three estimators and the TLHAD baseline.
double flops(Method method, const ArrayConfig& cfg, int n_snapshots);

}  // namespace doa
