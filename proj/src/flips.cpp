#include "chains/flips.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chains {
namespace {

void require_planar_polygon(const ChainConfig& polygon) {
  if (!polygon.closed)
    throw std::invalid_argument("pockets: input must be a closed polygon");
  const double tol = default_tol(polygon);
  for (const Vec3& v : polygon.vertices)
    if (std::abs(v.z()) > tol)
      throw std::invalid_argument("pockets: polygon must lie in z = 0");
}

}  // namespace

double polygon_area(const ChainConfig& polygon) {
  double a = 0.0;
  const int n = polygon.vertex_count();
  for (int i = 0; i < n; ++i) {
    const Vec3& p = polygon.vertices[i];
    const Vec3& q = polygon.vertices[(i + 1) % n];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return a / 2;
}

std::vector<Pocket> pockets(const ChainConfig& polygon) {
  require_planar_polygon(polygon);
  const int n = polygon.vertex_count();
  const std::vector<int> hull = convex_hull2(polygon.vertices);
  std::vector<bool> on_hull(n, false);
  for (int h : hull) on_hull[h] = true;

  // Hull vertices of a simple polygon occur in boundary order; walk the
  // boundary and cut it at hull vertices.
  std::vector<int> stops;
  for (int i = 0; i < n; ++i)
    if (on_hull[i]) stops.push_back(i);

  std::vector<Pocket> out;
  const int k = static_cast<int>(stops.size());
  for (int s = 0; s < k; ++s) {
    const int u = stops[s];
    const int w = stops[(s + 1) % k];
    std::vector<int> interior;
    for (int i = (u + 1) % n; i != w; i = (i + 1) % n) interior.push_back(i);
    if (!interior.empty())
      out.push_back(Pocket{{u, w}, std::move(interior)});
  }
  return out;
}

std::pair<Move, ChainConfig> flip(const ChainConfig& polygon,
                                  const Pocket& pocket) {
  require_planar_polygon(polygon);
  const Vec3& pu = polygon.vertices[pocket.lid.first];
  const Vec3& pw = polygon.vertices[pocket.lid.second];
  const Vec3 axis = (pw - pu).normalized();

  // Rotation sign that sweeps the pocket chain through the +z halfspace.
  double sign = 0.0;
  double far_dist = -1.0;
  for (int i : pocket.chain) {
    const Vec3 r = polygon.vertices[i] - pu;
    const Vec3 radial = r - r.dot(axis) * axis;
    if (radial.norm() > far_dist) {
      far_dist = radial.norm();
      sign = (axis.cross(radial).z() > 0) ? 1.0 : -1.0;
    }
  }
  if (sign == 0.0) throw std::logic_error("flip: pocket chain on lid line");

  const SubchainAboutLineMove move{pocket.lid.first, pocket.lid.second,
                                   sign * M_PI};
  ChainConfig next = apply_move(move, polygon);
  for (Vec3& v : next.vertices) v.z() = 0.0;  // exact planar re-embedding

  const SimplicityResult s = is_simple(next);
  if (!s.simple)
    throw std::logic_error("flip: reflected polygon is not simple");
  if (std::abs(polygon_area(next)) <= std::abs(polygon_area(polygon)))
    throw std::logic_error("flip: area did not increase");
  return {move, std::move(next)};
}

namespace {

// Deterministic pocket order: the pocket whose lid contains the
// lexicographically least hull vertex; ties by the smaller index of the
// lid's other endpoint.
const Pocket& choose_pocket(const std::vector<Pocket>& ps,
                            const ChainConfig& polygon) {
  auto lex_less = [&](int a, int b) {
    const Vec3& p = polygon.vertices[a];
    const Vec3& q = polygon.vertices[b];
    if (p.x() != q.x()) return p.x() < q.x();
    return p.y() < q.y();
  };
  const Pocket* best = nullptr;
  int best_key = -1, best_other = -1;
  for (const Pocket& p : ps) {
    const int key = lex_less(p.lid.first, p.lid.second) ? p.lid.first
                                                        : p.lid.second;
    const int other = key == p.lid.first ? p.lid.second : p.lid.first;
    if (!best || lex_less(key, best_key) ||
        (!lex_less(best_key, key) && other < best_other)) {
      best = &p;
      best_key = key;
      best_other = other;
    }
  }
  return *best;
}

}  // namespace

FlipConvexifyResult convexify_flips(const ChainConfig& polygon,
                                    long max_flips) {
  FlipConvexifyResult res;
  res.plan.initial = polygon;
  ChainConfig cur = polygon;
  while (res.flips < max_flips) {
    if (shape_classify(cur) == ShapeClass::kConvexPlanar) {
      res.convex = true;
      return res;
    }
    const std::vector<Pocket> ps = pockets(cur);
    if (ps.empty()) {
      res.convex = true;
      return res;
    }
    auto [move, next] = flip(cur, choose_pocket(ps, cur));
    res.plan.moves.push_back(move);
    cur = std::move(next);
    ++res.flips;
  }
  res.convex = shape_classify(cur) == ShapeClass::kConvexPlanar;
  return res;
}

}  // namespace chains
