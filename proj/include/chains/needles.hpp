#pragma once

// The "knitting needles" locked chain, its doubled closed version, the
// geometric locking preconditions, and the knot determinant certificate.

#include "chains/motion.hpp"

#include <cstdint>

namespace chains {

struct NeedleParams {
  double l0 = 3.5, l1 = 1.0, l2 = 1.0, l3 = 1.0, l4 = 6.5;
  double r = 3.0;  // ball radius, centered on v_1

  double cord_length() const { return l1 + l2 + l3; }
  /// Throws std::invalid_argument unless r >= L, l0 > r, l4 > r + L.
  void validate() const;
};

/// The 6-vertex open knitting-needles chain K: long needles e_0 and e_4
/// joined by the 3-link cord, interwoven so that the doubled closed chain
/// is certified knotted (determinant 3).
ChainConfig make_knitting_needles(const NeedleParams& params);

/// K plus a parallel copy of its spine at distance `offset`, endpoints
/// joined into a simple closed chain whose knot determinant is 3.
ChainConfig make_locked_closed(const NeedleParams& params, double offset);
ChainConfig make_locked_closed(const NeedleParams& params);

struct ExclusionReport {
  long trials = 0;
  long violations = 0;
  double min_margin_v0 = std::numeric_limits<double>::infinity();
  double min_margin_v5 = std::numeric_limits<double>::infinity();
};

/// Samples random cord configurations (respecting link lengths) and
/// checks |v0 - v1| > r and |v5 - v1| > r. The inequalities follow from
/// the parameter invariants by the triangle inequality; the sampling is a
/// sanity harness, not the proof.
ExclusionReport endpoint_exclusion_check(const NeedleParams& params,
                                         long trials, std::uint64_t seed);

/// Knot determinant |Delta(-1)| of a closed simple chain, computed from a
/// regular projection diagram via the Fox coloring matrix. Invariant under
/// projection choice. Throws when no regular projection is found.
long knot_determinant(const ChainConfig& closed_config);

/// Same, along one explicit direction (exposed for the invariance check).
long knot_determinant_along(const ChainConfig& closed_config,
                            const Vec3& direction);

struct StraightenAttemptReport {
  double initial_potential = 0.0;  // sum of exterior angles
  double best_potential = 0.0;
  long moves_tried = 0;
  long moves_accepted = 0;
};

/// Randomized greedy descent of the straightness potential using small
/// certified single-joint moves. Locked chains stall above a positive
/// floor; chains with simple projections reach ~0.
StraightenAttemptReport random_straighten_attempt(const ChainConfig& config,
                                                  long budget,
                                                  std::uint64_t seed);

}  // namespace chains
