#pragma once

#include <Eigen/Dense>
#include <vector>

#include "doa/array_model.hpp"
#include "doa/numerics.hpp"

namespace doa {

// Per-sector average output powers paired with sector center angles.
struct PowerProfile {
  Eigen::VectorXd sector_angles;  // ascending, in (0, pi)
  Eigen::VectorXd powers;         // nonnegative

  void validate() const;
};

// Candidate DOA angles from Root-MUSIC rooting plus alias expansion.
struct CandidateSet {
  std::vector<double> angles;  // radians in (0, pi), deduplicated
  bool no_signal = false;      // eigenvalue spread below the detection threshold
};

struct QiEstimate {
  double angle = 0.0;
  bool degenerate = false;  // non-concave three-point fit, sector center returned
};

struct CombinedEstimate {
  double angle = 0.0;
  bool low_confidence = false;  // empty candidate set, fell back to the reference
};

// powers[k] = (1/L) sum_l |y_k(l)|^2.
PowerProfile power_profile(const SnapshotMatrix& snapshots,
                           const Eigen::VectorXd& sector_angles);

// Center angle of the strongest sector; ties break toward the lowest index.
double max_rp(const PowerProfile& profile);

// Vertex of the parabola through the three profile points centered on
// k_star (zero-based). Boundary sectors are handled by mirror padding; a
// non-concave fit returns the sector center with the degenerate flag set.
QiEstimate quadratic_interp(const PowerProfile& profile, int k_star);

QiEstimate max_rp_qi(const PowerProfile& profile);

// Root-MUSIC candidate generation from the Q left subarrays (all-ones
// analog weights): sample covariance, EVD, noise projector, rooting of the
// degree-2(Q-1) polynomial, then expansion of the root nearest the unit
// circle into its full alias family on (0, pi).
CandidateSet root_music_candidates(const Eigen::MatrixXcd& left_snapshots,
                                   const ArrayConfig& cfg);

// Same pipeline starting from a covariance estimate; n_snapshots drives the
// finite-sample signal-presence threshold.
CandidateSet root_music_candidates_from_covariance(const HermitianMatrix& covariance,
                                                   const ArrayConfig& cfg,
                                                   int n_snapshots);

// Candidate minimizing squared angular distance to the reference; ties go to
// the smaller angle. An empty set falls back to the reference.
CombinedEstimate disambiguate(const CandidateSet& candidates, double reference);

// Full two-part estimator: Max-RP-QI on the right-part profile provides the
// reference that selects among the Root-MUSIC candidates from the left part.
CombinedEstimate root_music_plus_max_rp_qi(const SnapshotMatrix& right_snapshots,
                                           const Eigen::MatrixXcd& left_snapshots,
                                           const ArrayConfig& cfg);

}  // namespace doa
