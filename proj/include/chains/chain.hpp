#pragma once

// Chain/polygon representation, simplicity and shape classification, and
// orthogonal projection with certificates.

#include "chains/geom.hpp"

#include <Eigen/Geometry>

#include <optional>
#include <string>
#include <vector>

namespace chains {

struct ChainConfig {
  std::vector<Vec3> vertices;  // v_0..v_n; closed chains store no duplicate
  bool closed = false;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int edge_count() const {
    return closed ? vertex_count() : vertex_count() - 1;
  }
  Segment edge(int i) const {
    return {vertices[i], vertices[(i + 1) % vertex_count()]};
  }
  std::vector<double> link_lengths() const;
  double diameter() const { return bbox_diameter(vertices); }
};

/// Validates and builds a chain. Throws std::invalid_argument on repeated
/// consecutive vertices, too few vertices, or non-finite coordinates.
ChainConfig make_chain(std::vector<Vec3> vertices, bool closed);

/// Default distance tolerance for a configuration: kRelTol x bbox diameter.
double default_tol(const ChainConfig& config);

struct ClearanceWitness {
  int edge1 = -1;
  int edge2 = -1;
  double distance = std::numeric_limits<double>::infinity();
  bool fold_back = false;  // adjacent pair doubled back onto itself
};

/// Spherical region inside which edge-pair contacts are ignored (used for
/// the weakly-simple phases of the arch planner).
struct ExemptionBall {
  Vec3 center;
  double radius = 0.0;
};

/// Minimum clearance over all edge pairs. Non-adjacent pairs use the plain
/// segment distance; adjacent pairs exclude a ball of radius
/// kAdjacentExclusion x min(len) around the shared vertex and report 0 on
/// fold-back. +inf for chains with <= 1 edge.
double min_clearance(const ChainConfig& config,
                     const std::vector<ExemptionBall>& exemptions = {},
                     ClearanceWitness* witness = nullptr);

struct SimplicityResult {
  bool simple = false;
  ClearanceWitness witness;  // valid when !simple
};

SimplicityResult is_simple(const ChainConfig& config, double tol);
inline SimplicityResult is_simple(const ChainConfig& config) {
  return is_simple(config, default_tol(config));
}

enum class ShapeClass { kStraight, kConvexPlanar, kOther };
const char* to_string(ShapeClass s);

ShapeClass shape_classify(const ChainConfig& config, double tol);
inline ShapeClass shape_classify(const ChainConfig& config) {
  return shape_classify(config, default_tol(config));
}

struct ProjectionCertificate {
  Vec3 direction = Vec3::UnitZ();
  double min_projected_clearance = 0.0;
  double min_projected_edge_length = 0.0;
};

struct ProjectionResult {
  bool ok = false;
  ChainConfig planar;  // re-embedded with z = 0
  ProjectionCertificate certificate;
  std::string diagnostic;
};

/// Orthogonal projection along a unit direction onto the plane normal to
/// it. Succeeds iff the projected chain is simple with positive clearance
/// and no edge projects below 1e-6 x diameter.
ProjectionResult project(const ChainConfig& config, const Vec3& direction);

/// Rigidly transformed copy of a chain.
ChainConfig transform_chain(const ChainConfig& config,
                            const Eigen::Isometry3d& pose);

/// Rotation taking `direction` to +z.
Eigen::Isometry3d rotation_to_z(const Vec3& direction);

}  // namespace chains
