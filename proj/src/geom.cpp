#include "chains/geom.hpp"

#include <Eigen/Geometry>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace chains {
namespace {

using Rational = boost::multiprecision::cpp_rational;

void require_finite(const Vec3& p) {
  if (!p.allFinite()) throw std::invalid_argument("non-finite coordinate");
}

int sign_of(double v) { return (v > 0) - (v < 0); }

int sign_of(const Rational& v) {
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

// Exact 2D orientation via rational arithmetic (doubles convert exactly).
int orient2_exact(const Vec3& p, const Vec3& q, const Vec3& r) {
  Rational px(p.x()), py(p.y()), qx(q.x()), qy(q.y()), rx(r.x()), ry(r.y());
  Rational det = (qx - px) * (ry - py) - (qy - py) * (rx - px);
  return sign_of(det);
}

int orient3_exact(const Vec3& p, const Vec3& q, const Vec3& r, const Vec3& s) {
  Rational ax = Rational(q.x()) - Rational(p.x());
  Rational ay = Rational(q.y()) - Rational(p.y());
  Rational az = Rational(q.z()) - Rational(p.z());
  Rational bx = Rational(r.x()) - Rational(p.x());
  Rational by = Rational(r.y()) - Rational(p.y());
  Rational bz = Rational(r.z()) - Rational(p.z());
  Rational cx = Rational(s.x()) - Rational(p.x());
  Rational cy = Rational(s.y()) - Rational(p.y());
  Rational cz = Rational(s.z()) - Rational(p.z());
  Rational det = ax * (by * cz - bz * cy) - ay * (bx * cz - bz * cx) +
                 az * (bx * cy - by * cx);
  return sign_of(det);
}

}  // namespace

const char* to_string(ContactClass c) {
  switch (c) {
    case ContactClass::kDisjoint: return "disjoint";
    case ContactClass::kSharedEndpoint: return "shared-endpoint";
    case ContactClass::kProperCrossing: return "proper-crossing";
    case ContactClass::kOverlap: return "overlap";
    case ContactClass::kEndpointOnInterior: return "endpoint-on-interior";
  }
  return "?";
}

int orient2(const Vec3& p, const Vec3& q, const Vec3& r) {
  require_finite(p);
  require_finite(q);
  require_finite(r);
  const double detl = (q.x() - p.x()) * (r.y() - p.y());
  const double detr = (q.y() - p.y()) * (r.x() - p.x());
  const double det = detl - detr;
  // Shewchuk-style static filter; fall through to exact arithmetic when
  // the determinant magnitude is below the rounding-error bound.
  double detsum;
  if (detl > 0) {
    if (detr <= 0) return sign_of(det);
    detsum = detl + detr;
  } else if (detl < 0) {
    if (detr >= 0) return sign_of(det);
    detsum = -detl - detr;
  } else {
    return sign_of(-detr);
  }
  constexpr double kErrBound = 3.3306690621773724e-16;  // (3 + 16 eps) eps
  if (std::abs(det) > kErrBound * detsum) return sign_of(det);
  return orient2_exact(p, q, r);
}

int orient3(const Vec3& p, const Vec3& q, const Vec3& r, const Vec3& s) {
  require_finite(p);
  require_finite(q);
  require_finite(r);
  require_finite(s);
  const Vec3 a = q - p, b = r - p, c = s - p;
  const double det = a.dot(b.cross(c));
  const double permanent =
      (std::abs(b.y() * c.z()) + std::abs(b.z() * c.y())) * std::abs(a.x()) +
      (std::abs(b.x() * c.z()) + std::abs(b.z() * c.x())) * std::abs(a.y()) +
      (std::abs(b.x() * c.y()) + std::abs(b.y() * c.x())) * std::abs(a.z());
  constexpr double kErrBound = 7.7715611723761027e-16;  // (7 + 56 eps) eps
  if (std::abs(det) > kErrBound * permanent) return sign_of(det);
  return orient3_exact(p, q, r, s);
}

double seg_seg_distance3(const Segment& s1, const Segment& s2) {
  auto [s, t] = seg_seg_closest_params(s1, s2);
  const Vec3 p = s1.a + s * (s1.b - s1.a);
  const Vec3 q = s2.a + t * (s2.b - s2.a);
  return (p - q).norm();
}

std::pair<double, double> seg_seg_closest_params(const Segment& s1,
                                                 const Segment& s2) {
  // Eberly's clamped quadratic minimization.
  const Vec3 d1 = s1.b - s1.a;
  const Vec3 d2 = s2.b - s2.a;
  const Vec3 r = s1.a - s2.a;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  if (a <= 0 || e <= 0) throw std::invalid_argument("degenerate segment");

  const double b = d1.dot(d2);
  const double c = d1.dot(r);
  const double denom = a * e - b * b;

  double s = 0.0;
  if (denom > 0) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
  double t = (b * s + f) / e;
  if (t < 0) {
    t = 0;
    s = std::clamp(-c / a, 0.0, 1.0);
  } else if (t > 1) {
    t = 1;
    s = std::clamp((b - c) / a, 0.0, 1.0);
  }
  return {s, t};
}

ContactClass seg_seg_contact2(const Segment& s1, const Segment& s2) {
  const Vec3 &a = s1.a, &b = s1.b, &c = s2.a, &d = s2.b;
  const int o1 = orient2(a, b, c);
  const int o2 = orient2(a, b, d);
  const int o3 = orient2(c, d, a);
  const int o4 = orient2(c, d, b);

  auto same_xy = [](const Vec3& p, const Vec3& q) {
    return p.x() == q.x() && p.y() == q.y();
  };
  auto on_segment = [&](const Vec3& p, const Vec3& u, const Vec3& v) {
    // p collinear with uv assumed; closed-range box test.
    return std::min(u.x(), v.x()) <= p.x() && p.x() <= std::max(u.x(), v.x()) &&
           std::min(u.y(), v.y()) <= p.y() && p.y() <= std::max(u.y(), v.y());
  };

  if (o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) {
    if (o1 != o2 && o3 != o4) return ContactClass::kProperCrossing;
    return ContactClass::kDisjoint;
  }

  if (o1 == 0 && o2 == 0) {
    // Collinear segments: classify by 1D overlap.
    const bool ca = on_segment(c, a, b), da = on_segment(d, a, b);
    const bool ac = on_segment(a, c, d), bc = on_segment(b, c, d);
    if (!ca && !da && !ac && !bc) return ContactClass::kDisjoint;
    // Single shared point iff the segments touch end to end.
    for (const Vec3* p : {&a, &b}) {
      for (const Vec3* q : {&c, &d}) {
        if (same_xy(*p, *q)) {
          const Vec3& p_other = (p == &a) ? b : a;
          const Vec3& q_other = (q == &c) ? d : c;
          if (!on_segment(p_other, c, d) && !on_segment(q_other, a, b) &&
              !same_xy(p_other, q_other))
            return ContactClass::kSharedEndpoint;
        }
      }
    }
    return ContactClass::kOverlap;
  }

  // Exactly one endpoint lies on the other segment's line; a contact exists
  // only when it falls inside the closed segment.
  struct Touch {
    const Vec3* p;
    bool is_endpoint_of_other;
  };
  std::vector<const Vec3*> touches;
  if (o1 == 0 && on_segment(c, a, b)) touches.push_back(&c);
  if (o2 == 0 && on_segment(d, a, b)) touches.push_back(&d);
  if (o3 == 0 && on_segment(a, c, d)) touches.push_back(&a);
  if (o4 == 0 && on_segment(b, c, d)) touches.push_back(&b);
  if (touches.empty()) return ContactClass::kDisjoint;

  // A single contact point: endpoint of both, or endpoint on an interior.
  const Vec3& p = *touches.front();
  const bool end1 = same_xy(p, a) || same_xy(p, b);
  const bool end2 = same_xy(p, c) || same_xy(p, d);
  if (end1 && end2) return ContactClass::kSharedEndpoint;
  return ContactClass::kEndpointOnInterior;
}

std::vector<int> convex_hull2(const std::vector<Vec3>& points) {
  if (points.size() < 3)
    throw std::invalid_argument("convex_hull2: need at least 3 points");
  for (const Vec3& p : points) require_finite(p);

  std::vector<int> idx(points.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int i, int j) {
    if (points[i].x() != points[j].x()) return points[i].x() < points[j].x();
    return points[i].y() < points[j].y();
  });
  idx.erase(std::unique(idx.begin(), idx.end(),
                        [&](int i, int j) {
                          return points[i].x() == points[j].x() &&
                                 points[i].y() == points[j].y();
                        }),
            idx.end());

  auto build = [&](const std::vector<int>& order) {
    std::vector<int> hull;
    for (int i : order) {
      while (hull.size() >= 2 &&
             orient2(points[hull[hull.size() - 2]], points[hull.back()],
                     points[i]) <= 0)
        hull.pop_back();
      hull.push_back(i);
    }
    return hull;
  };

  std::vector<int> lower = build(idx);
  std::vector<int> rev(idx.rbegin(), idx.rend());
  std::vector<int> upper = build(rev);

  std::vector<int> hull = lower;
  hull.insert(hull.end(), upper.begin() + 1, upper.end() - 1);
  if (hull.size() < 3)
    throw std::invalid_argument("convex_hull2: points are collinear");
  return hull;  // CCW, starting from the lexicographic minimum.
}

double bbox_diameter(const std::vector<Vec3>& points) {
  if (points.empty()) return 0.0;
  Vec3 lo = points.front(), hi = points.front();
  for (const Vec3& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

}  // namespace chains
