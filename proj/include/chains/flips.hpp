#pragma once

// Erdos-Nagy convexification of planar simple polygons by pocket flips.

#include "chains/motion.hpp"

namespace chains {

struct Pocket {
  std::pair<int, int> lid;  // polygon vertex indices of the hull edge
  std::vector<int> chain;   // interior vertex indices, in traversal order
};

/// One pocket per hull edge absent from the polygon; empty iff convex.
/// Throws std::invalid_argument for open or nonplanar input.
std::vector<Pocket> pockets(const ChainConfig& polygon);

/// Flips the pocket chain across the lid line, through the +z halfspace.
/// Returns the realizing move (a pi rotation about the lid line) and the
/// resulting polygon. Throws std::logic_error if the reflection is
/// non-simple (cannot occur for true pockets).
std::pair<Move, ChainConfig> flip(const ChainConfig& polygon,
                                  const Pocket& pocket);

/// Signed shoelace area of a planar closed chain (z ignored).
double polygon_area(const ChainConfig& polygon);

struct FlipConvexifyResult {
  MotionPlan plan;
  bool convex = false;  // false when max_flips was reached first
  long flips = 0;
};

/// Repeatedly flips the deterministically-chosen first pocket until convex
/// or max_flips is reached. Termination is guaranteed but the count has no
/// bound in the vertex count, so hitting the cap is a flagged result, not
/// an error.
FlipConvexifyResult convexify_flips(const ChainConfig& polygon,
                                    long max_flips = 100000);

}  // namespace chains
