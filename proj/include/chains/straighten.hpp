#pragma once

// Straightening an open chain that admits a simple orthogonal projection:
// at most n moves, accumulating a vertical suffix above each successive
// base vertex.

#include "chains/motion.hpp"

#include <cstdint>
#include <optional>

namespace chains {

struct ProjectionSearch {
  Vec3 direction = Vec3::UnitZ();
  ProjectionCertificate certificate;
};

/// Searches +z, the 26 axis/diagonal directions, then seeded random unit
/// directions, until one yields a valid projection certificate or `budget`
/// candidates have been tried. Throws std::invalid_argument for non-simple
/// or closed input.
std::optional<ProjectionSearch> find_simple_projection(
    const ChainConfig& config, int budget, std::uint64_t seed = 0);

/// Plan straightening an open chain whose projection along +z is simple
/// (certificate checked internally). The result is a vertical segment
/// rising from v_0; at most n moves for n links. Throws on certificate
/// violation.
MotionPlan straighten(const ChainConfig& config);

/// Convenience: rotates the chain so `direction` becomes +z and plans on
/// the rotated configuration (which becomes the plan's initial).
MotionPlan straighten_along(const ChainConfig& config, const Vec3& direction);

}  // namespace chains
