#include "chains/straighten.hpp"

#include "chains/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace chains {

std::optional<ProjectionSearch> find_simple_projection(
    const ChainConfig& config, int budget, std::uint64_t seed) {
  if (config.closed)
    throw std::invalid_argument("find_simple_projection: chain must be open");
  const SimplicityResult s = is_simple(config);
  if (!s.simple)
    throw std::invalid_argument(
        "find_simple_projection: input chain is not simple");

  std::vector<Vec3> candidates;
  candidates.push_back(Vec3::UnitZ());
  for (int x = -1; x <= 1; ++x)
    for (int y = -1; y <= 1; ++y)
      for (int z = -1; z <= 1; ++z) {
        if (x == 0 && y == 0 && z == 0) continue;
        const Vec3 d = Vec3(x, y, z).normalized();
        if ((d - Vec3::UnitZ()).norm() > 1e-12) candidates.push_back(d);
      }

  Rng rng(seed);
  int tried = 0;
  auto try_dir = [&](const Vec3& d) -> std::optional<ProjectionSearch> {
    const ProjectionResult r = project(config, d);
    if (r.ok) return ProjectionSearch{d, r.certificate};
    return std::nullopt;
  };
  for (const Vec3& d : candidates) {
    if (tried++ >= budget) return std::nullopt;
    if (auto hit = try_dir(d)) return hit;
  }
  while (tried++ < budget) {
    if (auto hit = try_dir(rng.unit_vector())) return hit;
  }
  return std::nullopt;
}

MotionPlan straighten(const ChainConfig& config) {
  if (config.closed)
    throw std::invalid_argument("straighten: chain must be open");
  MotionPlan plan;
  plan.initial = config;
  const int n_links = config.edge_count();
  if (n_links <= 1) return plan;  // a single link is already straight

  const ProjectionResult cert = project(config, Vec3::UnitZ());
  if (!cert.ok)
    throw std::invalid_argument(
        "straighten: no simple +z projection: " + cert.diagnostic);

  const double tol = 1e-9 * std::max(config.diameter(), 1e-300);
  const int last = config.vertex_count() - 1;

  // Move 1: rotate the last link to vertical above v_{n-1}, within the
  // vertical plane containing it.
  {
    const Vec3 e = config.vertices[last] - config.vertices[last - 1];
    const Vec2 h(e.x(), e.y());
    if (h.norm() > tol) {
      const Vec3 u(h.x() / h.norm(), h.y() / h.norm(), 0.0);
      const double phi0 = std::atan2(h.norm(), e.z());
      SingleJointMove m;
      m.joint = last - 1;
      m.axis_point = config.vertices[last - 1];
      m.axis_dir = Vec3::UnitZ().cross(u);
      m.moving_side = MovingSide::kSuffix;
      m.angle = -phi0;
      plan.moves.push_back(m);
    }
  }

  // Then lift e_{i-1} to vertical for i = n-1 .. 1, carrying the vertical
  // suffix along.
  ChainConfig cur = apply(plan);
  for (int i = last - 1; i >= 1; --i) {
    const Vec3 e = cur.vertices[i] - cur.vertices[i - 1];
    if (Vec2(e.x(), e.y()).norm() <= tol && e.z() > 0) continue;  // vertical
    const CoupledLiftMove m{i};
    plan.moves.push_back(m);
    cur = apply_move(m, cur);
  }
  return plan;
}

MotionPlan straighten_along(const ChainConfig& config, const Vec3& direction) {
  return straighten(transform_chain(config, rotation_to_z(direction)));
}

}  // namespace chains
