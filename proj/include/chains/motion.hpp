#pragma once

// Moves (the unit of reconfiguration: at most four joint angles varying
// monotonically), motion plans, pose evaluation, and certified validation
// by conservative advancement.

#include "chains/chain.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace chains {

enum class MovingSide { kPrefix, kSuffix };

/// One joint rotates; one side of the chain is rigid, the other rotates
/// about an axis fixed in the rigid side's frame (which stays put in the
/// world during the move).
struct SingleJointMove {
  int joint = 0;
  Vec3 axis_point = Vec3::Zero();
  Vec3 axis_dir = Vec3::UnitZ();
  MovingSide moving_side = MovingSide::kSuffix;
  double angle = 0.0;
};

/// Vertices strictly between a and b (in traversal order, cyclically for
/// closed chains) rotate about the line through v_a and v_b. Only the two
/// dihedral joints at a and b vary.
struct SubchainAboutLineMove {
  int a = 0;
  int b = 0;
  double angle = 0.0;
};

/// Drives edge e_{joint-1} about v_{joint-1} within the vertical plane of
/// its projection, from its current inclination to vertical, while the
/// suffix from v_joint (which must already be a vertical segment) counter-
/// rotates at v_joint so it stays vertical.
struct CoupledLiftMove {
  int joint = 1;
};

enum class FourBarOrientation { kInPlane, kVerticalHalfplane };

/// Four joints partition a closed chain into four rigid blocks. The block
/// [joints[2], joints[3]] is driven: it rotates about `axis` (through the
/// position of joints[3]) by `angle`. The block [joints[3], joints[0]] is
/// ground. The position of joints[1] is solved per sample from closure,
/// constrained to `plane`; the branch is chosen by continuity and a branch
/// jump aborts the move. Block interiors follow rigidly: in-plane rigid
/// maps (kInPlane) or re-seated in the vertical halfplane above their base
/// chord (kVerticalHalfplane, used for the arch).
struct FourBarMove {
  std::array<int, 4> joints = {0, 1, 2, 3};
  Vec3 axis_point = Vec3::Zero();
  Vec3 axis_dir = Vec3::UnitZ();
  double angle = 0.0;
  Vec3 plane_point = Vec3::Zero();
  Vec3 plane_normal = Vec3::UnitZ();
  FourBarOrientation orientation = FourBarOrientation::kInPlane;
};

using Move = std::variant<SingleJointMove, SubchainAboutLineMove,
                          CoupledLiftMove, FourBarMove>;

const char* kind_name(const Move& move);

struct MotionPlan {
  ChainConfig initial;
  std::vector<Move> moves;
  // Contact-exemption regions for validation (weakly simple phases).
  std::vector<ExemptionBall> exemptions;
};

struct FourBarClosureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Configuration of the chain at parameter t in [0, 1] of a move applied
/// to `config` (the configuration at the start of the move). Poses are
/// defined analytically from the move-start configuration, never
/// integrated. Throws FourBarClosureError when four-bar closure is
/// unreachable or the branch jumps.
ChainConfig pose_at(const Move& move, const ChainConfig& config, double t);

/// pose_at(move, config, 1).
ChainConfig apply_move(const Move& move, const ChainConfig& config);

/// Composition of all moves at t = 1 each.
ChainConfig apply(const MotionPlan& plan);

/// Upper bound on the displacement of any vertex at intermediate times of
/// the step, given the realized configurations at both step endpoints.
double displacement_bound(const Move& move, const ChainConfig& at_t,
                          const ChainConfig& at_t_plus_dt);

struct ValidatePolicy {
  double tolerance = kRelTol;
  int initial_samples = 64;
  long max_steps = 1 << 16;
};

struct MoveRecord {
  int move_index = 0;
  long samples = 0;
  double min_clearance = std::numeric_limits<double>::infinity();
  double max_length_drift = 0.0;
  double min_margin = std::numeric_limits<double>::infinity();
};

struct ValidationReport {
  bool certified = false;
  std::vector<MoveRecord> per_move;
  std::string first_failure;  // empty when certified
};

/// Certified continuous validation. Each accepted step satisfies
/// displacement_bound < clearance/2 at the step start; link lengths are
/// checked at every sample against the plan's initial lengths. Geometric
/// failures and exhausted sample budgets yield an uncertified report, not
/// an exception.
ValidationReport validate(const MotionPlan& plan, const ValidatePolicy& policy);
inline ValidationReport validate(const MotionPlan& plan) {
  return validate(plan, ValidatePolicy{});
}

/// Interior angle at vertex i (between the incident edges), in [0, pi].
double joint_angle(const ChainConfig& config, int i);

}  // namespace chains
