#pragma once

// The "St. Louis Arch" convexification: pick vertices up one by one into a
// convex arch held in a vertical halfplane above a staging plane z =
// epsilon, convexifying the intermediate barbed polygons in that plane.

#include "chains/motion.hpp"

namespace chains {

struct ArchPlanResult {
  MotionPlan plan;
  double epsilon = 0.0;
  int rounds = 0;
  long moves = 0;
  bool used_flip_fallback = false;  // barbed phase fell back to pocket flips
};

/// Staging-plane height for a polygon: determined adaptively (starting at
/// 0.1 x clearance, halving on validation failure, up to 40 halvings).
/// Throws when no epsilon in the budget yields a certified plan.
double choose_epsilon(const ChainConfig& polygon);

struct BarbedConvexifyResult {
  std::vector<Move> moves;
  ChainConfig final_config;
  bool used_flip_fallback = false;
};

/// Convexifies a barbed polygon (convex but for one ear, apex at
/// `apex_index`) within its plane z = plane_z. The two vertices adjacent
/// to the virtual closing edge (apex and its successor) stay fixed.
/// Primary strategy: in-plane four-bar corrective moves; falls back to
/// pocket flips when the four-bar search stalls.
BarbedConvexifyResult convexify_barbed(const ChainConfig& barbed,
                                       int apex_index, double plane_z);

/// Full algorithm: n-2 rounds of (lift; flatten; convexify barbed; raise),
/// then a final flatten, ending with a convex polygon in the staging
/// plane. The returned plan is validator-certified.
ArchPlanResult convexify_arch(const ChainConfig& polygon);

}  // namespace chains
