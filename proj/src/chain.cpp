#include "chains/chain.hpp"

#include <cmath>
#include <stdexcept>

namespace chains {

std::vector<double> ChainConfig::link_lengths() const {
  std::vector<double> lengths;
  lengths.reserve(edge_count());
  for (int i = 0; i < edge_count(); ++i) lengths.push_back(edge(i).length());
  return lengths;
}

ChainConfig make_chain(std::vector<Vec3> vertices, bool closed) {
  const int n = static_cast<int>(vertices.size());
  if (!closed && n < 2)
    throw std::invalid_argument("open chain needs at least 2 vertices");
  if (closed && n < 3)
    throw std::invalid_argument("closed chain needs at least 3 vertices");
  for (const Vec3& v : vertices)
    if (!v.allFinite())
      throw std::invalid_argument("non-finite vertex coordinate");
  const int edges = closed ? n : n - 1;
  for (int i = 0; i < edges; ++i) {
    if ((vertices[(i + 1) % n] - vertices[i]).norm() == 0.0)
      throw std::invalid_argument("zero-length link at edge " +
                                  std::to_string(i));
  }
  return ChainConfig{std::move(vertices), closed};
}

double default_tol(const ChainConfig& config) {
  const double d = config.diameter();
  return kRelTol * (d > 0 ? d : 1.0);
}

namespace {

bool inside_exemption(const Vec3& p, const std::vector<ExemptionBall>& balls) {
  for (const ExemptionBall& b : balls)
    if ((p - b.center).norm() <= b.radius) return true;
  return false;
}

// Distance between adjacent edges outside the exclusion ball around the
// shared vertex; 0 on fold-back. `from_shared` orients both edges away
// from the common vertex.
double adjacent_clearance(const Vec3& shared, const Vec3& p, const Vec3& q,
                          bool* fold_back) {
  const Vec3 u = p - shared;
  const Vec3 v = q - shared;
  const double lu = u.norm(), lv = v.norm();
  const double cosang = std::clamp(u.dot(v) / (lu * lv), -1.0, 1.0);
  const double angle = std::acos(cosang);
  // angle 0 = doubled back (non-simple); angle pi = straight (allowed).
  if (angle < kFoldBackAngle) {
    *fold_back = true;
    return 0.0;
  }
  *fold_back = false;
  // Joints that are not nearly folded cannot self-contact near the shared
  // vertex; only near-fold joints contribute a (clipped) distance.
  if (angle > kAdjacentGuardAngle)
    return std::numeric_limits<double>::infinity();
  const double rho = kAdjacentExclusion * std::min(lu, lv);
  const Segment c1{shared + (rho / lu) * u, p};
  const Segment c2{shared + (rho / lv) * v, q};
  return seg_seg_distance3(c1, c2);
}

}  // namespace

double min_clearance(const ChainConfig& config,
                     const std::vector<ExemptionBall>& exemptions,
                     ClearanceWitness* witness) {
  const int m = config.edge_count();
  ClearanceWitness best;
  if (m <= 1) {
    if (witness) *witness = best;
    return std::numeric_limits<double>::infinity();
  }
  const int n = config.vertex_count();
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const bool adj_fwd = (j == i + 1);
      const bool adj_wrap = config.closed && i == 0 && j == m - 1;
      double d;
      bool fold = false;
      if (adj_fwd || adj_wrap) {
        const int shared = adj_fwd ? j : 0;
        const Vec3& w = config.vertices[shared];
        const Vec3& p = adj_fwd ? config.vertices[i]
                                : config.vertices[(1) % n];
        const Vec3& q = adj_fwd ? config.vertices[(j + 1) % n]
                                : config.vertices[m - 1];
        d = adjacent_clearance(w, p, q, &fold);
      } else {
        const Segment e1 = config.edge(i), e2 = config.edge(j);
        auto [s, t] = seg_seg_closest_params(e1, e2);
        const Vec3 c1 = e1.a + s * (e1.b - e1.a);
        const Vec3 c2 = e2.a + t * (e2.b - e2.a);
        if (!exemptions.empty() && inside_exemption(c1, exemptions) &&
            inside_exemption(c2, exemptions))
          continue;
        d = (c1 - c2).norm();
      }
      if (d < best.distance) {
        best.edge1 = i;
        best.edge2 = j;
        best.distance = d;
        best.fold_back = fold;
      }
    }
  }
  if (witness) *witness = best;
  return best.distance;
}

SimplicityResult is_simple(const ChainConfig& config, double tol) {
  const int m = config.edge_count();
  SimplicityResult res;
  res.simple = true;
  if (m <= 1) return res;
  for (int i = 0; i < m && res.simple; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const bool adj_fwd = (j == i + 1);
      const bool adj_wrap = config.closed && i == 0 && j == m - 1;
      if (adj_fwd || adj_wrap) {
        const Vec3& w = adj_fwd ? config.vertices[j] : config.vertices[0];
        const Vec3& p = adj_fwd ? config.vertices[i] : config.vertices[1];
        const Vec3& q = adj_fwd
                            ? config.vertices[(j + 1) % config.vertex_count()]
                            : config.vertices[m - 1];
        bool fold = false;
        adjacent_clearance(w, p, q, &fold);
        if (fold) {
          res.simple = false;
          res.witness = {i, j, 0.0, true};
          break;
        }
      } else {
        const double d = seg_seg_distance3(config.edge(i), config.edge(j));
        if (d <= tol) {
          res.simple = false;
          res.witness = {i, j, d, false};
          break;
        }
      }
    }
  }
  return res;
}

const char* to_string(ShapeClass s) {
  switch (s) {
    case ShapeClass::kStraight: return "straight";
    case ShapeClass::kConvexPlanar: return "convex-planar";
    case ShapeClass::kOther: return "other";
  }
  return "?";
}

namespace {

bool classify_straight(const ChainConfig& config, double tol) {
  const Vec3& a = config.vertices.front();
  const Vec3& b = config.vertices.back();
  const Vec3 d = b - a;
  const double len = d.norm();
  if (len <= tol) return false;
  const Vec3 dir = d / len;
  double prev = -tol;
  for (const Vec3& v : config.vertices) {
    const Vec3 rel = v - a;
    const double along = rel.dot(dir);
    if ((rel - along * dir).norm() > tol) return false;
    if (along < prev - tol) return false;
    prev = along;
  }
  return true;
}

bool classify_convex_planar(const ChainConfig& config, double tol) {
  const int n = config.vertex_count();
  // Newell plane fit.
  Vec3 normal = Vec3::Zero();
  Vec3 centroid = Vec3::Zero();
  for (int i = 0; i < n; ++i) {
    const Vec3& u = config.vertices[i];
    const Vec3& v = config.vertices[(i + 1) % n];
    normal += Vec3{(u.y() - v.y()) * (u.z() + v.z()),
                   (u.z() - v.z()) * (u.x() + v.x()),
                   (u.x() - v.x()) * (u.y() + v.y())};
    centroid += u;
  }
  centroid /= n;
  if (normal.norm() == 0) return false;
  normal.normalize();
  for (const Vec3& v : config.vertices)
    if (std::abs((v - centroid).dot(normal)) > tol) return false;

  // In-plane turn signs must agree (zeros at tolerance allowed).
  int sign = 0;
  for (int i = 0; i < n; ++i) {
    const Vec3 u = config.vertices[(i + 1) % n] - config.vertices[i];
    const Vec3 w = config.vertices[(i + 2) % n] - config.vertices[(i + 1) % n];
    const double cross = u.cross(w).dot(normal);
    if (std::abs(cross) <= tol * (u.norm() + w.norm())) continue;
    const int s = cross > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    else if (s != sign) return false;
  }
  return sign != 0;
}

}  // namespace

ShapeClass shape_classify(const ChainConfig& config, double tol) {
  if (!config.closed && classify_straight(config, tol))
    return ShapeClass::kStraight;
  if (config.closed && classify_convex_planar(config, tol))
    return ShapeClass::kConvexPlanar;
  return ShapeClass::kOther;
}

ProjectionResult project(const ChainConfig& config, const Vec3& direction) {
  ProjectionResult res;
  const Vec3 dir = direction.normalized();
  // Deterministic in-plane basis; for dir = +z this is (x, y), so an
  // already-planar chain projects to itself.
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(dir[i]) < std::abs(dir[k])) k = i;
  const Vec3 e = Vec3::Unit(k);
  const Vec3 u = (e - e.dot(dir) * dir).normalized();
  const Vec3 v = dir.cross(u);

  std::vector<Vec3> planar;
  planar.reserve(config.vertex_count());
  for (const Vec3& p : config.vertices)
    planar.emplace_back(p.dot(u), p.dot(v), 0.0);

  const double min_edge = 1e-6 * std::max(config.diameter(), 1e-300);
  ChainConfig flat{std::move(planar), config.closed};
  double shortest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < flat.edge_count(); ++i) {
    const double len = flat.edge(i).length();
    shortest = std::min(shortest, len);
    if (len < min_edge) {
      res.diagnostic = "edge " + std::to_string(i) +
                       " projects to a near-point (length " +
                       std::to_string(len) + ")";
      return res;
    }
  }

  ClearanceWitness w;
  const double clearance = min_clearance(flat, {}, &w);
  if (!(clearance > 0) || w.fold_back) {
    res.diagnostic = "projected chain is not simple (edges " +
                     std::to_string(w.edge1) + ", " + std::to_string(w.edge2) +
                     ")";
    return res;
  }
  res.ok = true;
  res.planar = std::move(flat);
  res.certificate = {dir, clearance, shortest};
  return res;
}

ChainConfig transform_chain(const ChainConfig& config,
                            const Eigen::Isometry3d& pose) {
  ChainConfig out = config;
  for (Vec3& v : out.vertices) v = pose * v;
  return out;
}

Eigen::Isometry3d rotation_to_z(const Vec3& direction) {
  Eigen::Isometry3d iso = Eigen::Isometry3d::Identity();
  iso.linear() = Eigen::Quaterniond::FromTwoVectors(direction.normalized(),
                                                    Vec3::UnitZ())
                     .toRotationMatrix();
  return iso;
}

}  // namespace chains
