#pragma once

// Low-level geometric primitives shared by the planners and the validator:
// sign-exact orientation predicates, segment distance/contact queries,
// convex hulls and chain clearance.

#include <Eigen/Core>

#include <limits>
#include <optional>
#include <vector>

namespace chains {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

/// Relative tolerance used for distance (not sign) comparisons.
inline constexpr double kRelTol = 1e-9;

/// Joint angles below this count as a fold-back (non-simple); angle pi
/// (straight joint) is always allowed.
inline constexpr double kFoldBackAngle = 1e-6;

/// Fraction of the shorter adjacent link excluded around a shared vertex
/// when measuring adjacent-edge clearance.
inline constexpr double kAdjacentExclusion = 0.05;

/// Adjacent edges only contribute clearance when their joint angle is
/// below this guard (nearly folded); wider joints cannot self-contact.
inline constexpr double kAdjacentGuardAngle = 0.1;

struct Segment {
  Vec3 a;
  Vec3 b;

  Segment() = default;
  Segment(const Vec3& pa, const Vec3& pb) : a(pa), b(pb) {}
  double length() const { return (b - a).norm(); }
};

enum class ContactClass {
  kDisjoint,
  kSharedEndpoint,
  kProperCrossing,
  kOverlap,
  kEndpointOnInterior,
};

const char* to_string(ContactClass c);

/// Sign of the 2D orientation determinant of (p, q, r), using x/y only.
/// Exact: a floating-point filter escalates to rational arithmetic, so the
/// returned sign is never wrong. Throws std::invalid_argument on
/// non-finite input.
int orient2(const Vec3& p, const Vec3& q, const Vec3& r);

/// Sign of the 3D orientation determinant of (p, q, r, s); +1 when s is on
/// the positive side of plane (p, q, r) oriented counterclockwise.
int orient3(const Vec3& p, const Vec3& q, const Vec3& r, const Vec3& s);

/// Minimum Euclidean distance between two closed segments in 3D.
double seg_seg_distance3(const Segment& s1, const Segment& s2);

/// Closest-parameter pair (s, t) realizing seg_seg_distance3.
std::pair<double, double> seg_seg_closest_params(const Segment& s1,
                                                 const Segment& s2);

/// Exact contact classification of two planar segments (z ignored).
/// "shared-endpoint" is reported only when the unique common point is an
/// endpoint of both segments.
ContactClass seg_seg_contact2(const Segment& s1, const Segment& s2);

/// Indices of the convex hull of planar points, counterclockwise, starting
/// from the lexicographically least point. Collinear boundary points are
/// dropped. Throws std::invalid_argument for <3 points or all-collinear
/// input.
std::vector<int> convex_hull2(const std::vector<Vec3>& points);

/// Euclidean diameter of the bounding box of a point set (0 when empty).
double bbox_diameter(const std::vector<Vec3>& points);

}  // namespace chains
