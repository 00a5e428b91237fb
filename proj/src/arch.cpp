#include "chains/arch.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace chains {
namespace {

// Internal planning failure; triggers a retry with a smaller epsilon.
struct ArchFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Vec3 rotate_point(const Vec3& p, const Vec3& axis_point, const Vec3& axis_dir,
                  double angle) {
  return axis_point +
         Eigen::AngleAxisd(angle, axis_dir.normalized()) * (p - axis_point);
}

// The "virtual polygon" of a partially-lifted chain: vertices 0..w closed
// by the virtual edge (w, 0). All planning predicates during the barbed
// phase are evaluated on it.
ChainConfig virtual_polygon(const ChainConfig& cfg, int w) {
  std::vector<Vec3> verts(cfg.vertices.begin(), cfg.vertices.begin() + w + 1);
  return make_chain(std::move(verts), true);
}

// Sum of wrong-way turn magnitudes of a closed polygon, z ignored; ~0 iff
// convex. Orientation is taken from the signed area.
double reflex_measure(const ChainConfig& poly) {
  const int n = poly.vertex_count();
  double area2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec3& a = poly.vertices[i];
    const Vec3& b = poly.vertices[(i + 1) % n];
    area2 += a.x() * b.y() - b.x() * a.y();
  }
  const double o = area2 >= 0 ? 1.0 : -1.0;
  double measure = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec3& p = poly.vertices[(i + n - 1) % n];
    const Vec3& q = poly.vertices[i];
    const Vec3& r = poly.vertices[(i + 1) % n];
    const Vec2 u(q.x() - p.x(), q.y() - p.y());
    const Vec2 v(r.x() - q.x(), r.y() - q.y());
    const double turn =
        std::atan2(u.x() * v.y() - u.y() * v.x(), u.dot(v));
    if (o * turn < 0) measure += std::abs(turn);
  }
  return measure;
}

// State threaded through the planner: the plan under construction and the
// configuration realized so far.
struct Builder {
  MotionPlan plan;
  ChainConfig cur;
  long moves = 0;
  bool used_flip = false;

  void emit(Move m) {
    cur = apply_move(m, cur);
    plan.moves.push_back(std::move(m));
    ++moves;
  }
};

// Rotates vertex w about the line through its neighbors until it reaches
// z = eps (smallest such rotation).
void lift_vertex(Builder& b, int w, double eps) {
  const int n = b.cur.vertex_count();
  const int ia = (w + n - 1) % n, ib = (w + 1) % n;
  const Vec3 A = b.cur.vertices[ia];
  const Vec3 B = b.cur.vertices[ib];
  const Vec3 d = (B - A).normalized();
  const Vec3 r = b.cur.vertices[w] - A;
  const Vec3 rpar = r.dot(d) * d;
  const Vec3 u = r - rpar;
  const Vec3 v = d.cross(u);
  const double c0 = (A + rpar).z();
  const double cu = u.z(), cv = v.z();
  const double radius = std::hypot(cu, cv);
  const double target = eps - c0;
  if (!(radius > 0) || std::abs(target) > radius) {
    std::ostringstream msg;
    msg << "lift of vertex " << w << " cannot reach the staging plane";
    throw ArchFailure(msg.str());
  }
  const double phase = std::atan2(cv, cu);
  const double detune = std::acos(std::clamp(target / radius, -1.0, 1.0));
  auto wrap = [](double a) {
    while (a > M_PI) a -= 2 * M_PI;
    while (a <= -M_PI) a += 2 * M_PI;
    return a;
  };
  const double t1 = wrap(phase + detune), t2 = wrap(phase - detune);
  const double theta = std::abs(t1) <= std::abs(t2) ? t1 : t2;
  if (theta != 0.0) b.emit(SubchainAboutLineMove{ia, ib, theta});
}

// In-plane side of point p relative to the directed line a->b (z ignored).
int side2(const Vec3& a, const Vec3& b, const Vec3& p) {
  const double cr =
      (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
  return (cr > 0) - (cr < 0);
}

// Rotates the arch interior (1..base-1) a quarter turn about the base line
// (0, base), landing in the staging plane on the side opposite the apex.
void flatten_arch(Builder& b, int base, int apex, double eps) {
  if (base < 2) return;  // no interior vertices
  const Vec3& p0 = b.cur.vertices[0];
  const Vec3& pb = b.cur.vertices[base];
  int apex_side = side2(p0, pb, b.cur.vertices[apex]);
  if (apex_side == 0) apex_side = 1;
  // Representative interior vertex farthest from the base line.
  const Vec3 dir = (pb - p0).normalized();
  int rep = 1;
  double best = -1;
  for (int k = 1; k < base; ++k) {
    const Vec3 r = b.cur.vertices[k] - p0;
    const double d = (r - r.dot(dir) * dir).norm();
    if (d > best) {
      best = d;
      rep = k;
    }
  }
  for (double ang : {M_PI / 2, -M_PI / 2}) {
    const Vec3 moved = rotate_point(b.cur.vertices[rep], p0, dir, ang);
    if (side2(p0, pb, moved) == -apex_side &&
        std::abs(moved.z() - eps) < 1e-6 * std::max(1.0, b.cur.diameter())) {
      b.emit(SubchainAboutLineMove{0, base, ang});
      return;
    }
  }
  throw ArchFailure("flatten: arch is not in a vertical halfplane");
}

// Rotates the convexified chain (1..w-1) up into the vertical halfplane
// above the new base line (0, w).
void raise_arch(Builder& b, int w) {
  if (w < 2) return;
  const Vec3& p0 = b.cur.vertices[0];
  const Vec3 dir = (b.cur.vertices[w] - p0).normalized();
  int rep = 1;
  double best = -1;
  for (int k = 1; k < w; ++k) {
    const Vec3 r = b.cur.vertices[k] - p0;
    const double d = (r - r.dot(dir) * dir).norm();
    if (d > best) {
      best = d;
      rep = k;
    }
  }
  if (best <= 0) return;  // degenerate (collinear) arch: nothing to raise
  for (double ang : {M_PI / 2, -M_PI / 2}) {
    const Vec3 moved = rotate_point(b.cur.vertices[rep], p0, dir, ang);
    if (moved.z() > b.cur.vertices[rep].z()) {
      b.emit(SubchainAboutLineMove{0, w, ang});
      return;
    }
  }
  throw ArchFailure("raise: no upward side");
}

// One corrective four-bar candidate for the barbed phase.
struct Mechanism {
  int j1 = 0, j2 = 0;
  double sign = 1.0;
};

FourBarMove make_move(const ChainConfig& cur, int w, const Mechanism& mech,
                      double angle, double eps) {
  FourBarMove m;
  m.joints = {0, mech.j1, mech.j2, w};
  m.axis_point = cur.vertices[w];
  m.axis_dir = Vec3::UnitZ();
  m.angle = mech.sign * angle;
  m.plane_point = Vec3(0, 0, eps);
  m.plane_normal = Vec3::UnitZ();
  m.orientation = FourBarOrientation::kInPlane;
  return m;
}

// Feasibility of a barbed move at one sampled parameter: closure held, the
// virtual polygon stayed simple, and the real chain kept clearance.
bool barbed_pose_ok(const ChainConfig& posed, int w) {
  const ChainConfig vp = virtual_polygon(posed, w);
  if (!is_simple(vp).simple) return false;
  return min_clearance(posed) > 0;
}

// In-plane pocket flip fallback: flips a pocket of the virtual polygon
// whose interior avoids the two pinned vertices (0 and w), sweeping the
// empty halfspace above the staging plane.
bool try_flip_fallback(Builder& b, int w, double eps) {
  const ChainConfig vp = virtual_polygon(b.cur, w);
  std::vector<int> hull;
  try {
    hull = convex_hull2(vp.vertices);
  } catch (const std::invalid_argument&) {
    return false;
  }
  std::vector<bool> on_hull(w + 1, false);
  for (int h : hull) on_hull[h] = true;
  // Hull stops in traversal order; a gap between consecutive stops is a
  // pocket. Skip pockets wrapping past the pinned pair (w, 0).
  std::vector<int> stops;
  for (int i = 0; i <= w; ++i)
    if (on_hull[i]) stops.push_back(i);
  if (stops.size() < 2) return false;
  for (size_t s = 0; s + 1 < stops.size(); ++s) {
    const int a = stops[s], c = stops[s + 1];
    if (c == a + 1) continue;  // no interior
    const Vec3& pa = b.cur.vertices[a];
    const Vec3 dir = (b.cur.vertices[c] - pa).normalized();
    // Pick the rotation sense that sweeps z > eps.
    const Vec3 probe =
        rotate_point(b.cur.vertices[a + 1], pa, dir, M_PI / 2);
    const double sign = probe.z() > eps ? 1.0 : -1.0;
    SubchainAboutLineMove flip{a, c, sign * M_PI};
    const ChainConfig next = apply_move(flip, b.cur);
    if (!barbed_pose_ok(next, w)) continue;
    b.emit(flip);
    b.used_flip = true;
    return true;
  }
  return false;
}

// Convexifies the virtual polygon 0..w inside the staging plane with
// corrective four-bar moves (pinned at 0 and w), falling back to pocket
// flips when the mechanism search stalls.
void barbed_phase(Builder& b, int w, double eps) {
  if (w < 3) return;  // triangle: always convex
  const double tol = default_tol(b.cur);
  const long budget = 30L * (w + 1) + 60;
  const double probe = 1e-3;
  for (long iter = 0; iter < budget; ++iter) {
    const ChainConfig vp = virtual_polygon(b.cur, w);
    if (shape_classify(vp, tol) == ShapeClass::kConvexPlanar) return;
    const double r0 = reflex_measure(vp);
    if (r0 < 1e-9) return;  // numerically convex

    // Candidate mechanisms: splits bracketing each reflex vertex plus the
    // canonical end splits.
    std::vector<std::pair<int, int>> splits = {{1, w - 1}};
    if (w >= 3) {
      splits.push_back({1, 2});
      splits.push_back({w - 2, w - 1});
    }
    for (int r = 2; r <= w - 2; ++r) splits.push_back({r - 1, r});

    Mechanism best_mech;
    double best_drop = 0.0;
    for (const auto& [j1, j2] : splits) {
      if (!(0 < j1 && j1 < j2 && j2 < w)) continue;
      for (double sign : {1.0, -1.0}) {
        const FourBarMove m = make_move(b.cur, w, {j1, j2, sign}, probe, eps);
        ChainConfig posed;
        try {
          posed = apply_move(m, b.cur);
        } catch (const FourBarClosureError&) {
          continue;
        }
        if (!barbed_pose_ok(posed, w)) continue;
        const double drop = r0 - reflex_measure(virtual_polygon(posed, w));
        if (drop > best_drop) {
          best_drop = drop;
          best_mech = {j1, j2, sign};
        }
      }
    }

    if (best_drop <= 0.0) {
      if (try_flip_fallback(b, w, eps)) continue;
      throw ArchFailure("barbed convexification stalled");
    }

    // Extend the drive as far as the reflex measure keeps dropping and
    // every sampled pose stays feasible.
    double best_angle = probe;
    double best_r = r0 - best_drop;
    double angle = probe;
    while (angle < M_PI / 2) {
      angle = std::min(angle * 2, M_PI / 2);
      const FourBarMove m = make_move(b.cur, w, best_mech, angle, eps);
      bool ok = true;
      double r_end = 0.0;
      try {
        for (int s = 1; s <= 8; ++s) {
          const ChainConfig posed = pose_at(m, b.cur, s / 8.0);
          if (!barbed_pose_ok(posed, w)) {
            ok = false;
            break;
          }
          if (s == 8) r_end = reflex_measure(virtual_polygon(posed, w));
        }
      } catch (const FourBarClosureError&) {
        ok = false;
      }
      if (!ok || r_end >= best_r) break;
      best_angle = angle;
      best_r = r_end;
    }
    b.emit(make_move(b.cur, w, best_mech, best_angle, eps));
  }
  throw ArchFailure("barbed move budget exhausted");
}

MotionPlan plan_at_epsilon(const ChainConfig& polygon, double eps,
                           long* moves, bool* used_flip) {
  Builder b;
  b.plan.initial = polygon;
  b.cur = polygon;
  const int n = polygon.vertex_count();
  lift_vertex(b, 0, eps);
  lift_vertex(b, 1, eps);
  for (int w = 2; w < n; ++w) {
    lift_vertex(b, w, eps);
    flatten_arch(b, w - 1, w, eps);
    barbed_phase(b, w, eps);
    if (w < n - 1) raise_arch(b, w);
  }
  if (shape_classify(b.cur) != ShapeClass::kConvexPlanar)
    throw ArchFailure("final configuration is not convex-planar");
  if (moves) *moves = b.moves;
  if (used_flip) *used_flip = b.used_flip;
  return b.plan;
}

ArchPlanResult convexify_with_retries(const ChainConfig& polygon) {
  if (!polygon.closed)
    throw std::invalid_argument("convexify_arch: closed polygon required");
  const double tol = default_tol(polygon);
  for (const Vec3& v : polygon.vertices)
    if (std::abs(v.z()) > tol)
      throw std::invalid_argument("convexify_arch: polygon must lie in z=0");
  if (!is_simple(polygon).simple)
    throw std::invalid_argument("convexify_arch: polygon must be simple");

  // A triangle has no non-adjacent edge pairs, so clearance can be
  // infinite; fall back to the shortest link as the length scale.
  double scale = min_clearance(polygon);
  if (!std::isfinite(scale)) {
    scale = std::numeric_limits<double>::infinity();
    for (double l : polygon.link_lengths()) scale = std::min(scale, l);
  }
  const double eps0 = 0.1 * scale;
  std::string last_failure = "no attempt";
  double eps = eps0;
  for (int halving = 0; halving <= 40; ++halving, eps /= 2) {
    long moves = 0;
    bool used_flip = false;
    MotionPlan plan;
    try {
      plan = plan_at_epsilon(polygon, eps, &moves, &used_flip);
    } catch (const ArchFailure& e) {
      last_failure = e.what();
      continue;
    } catch (const FourBarClosureError& e) {
      last_failure = e.what();
      continue;
    }
    const ValidationReport rep = validate(plan);
    if (!rep.certified) {
      last_failure = rep.first_failure;
      continue;
    }
    ArchPlanResult res;
    res.plan = std::move(plan);
    res.epsilon = eps;
    res.rounds = polygon.vertex_count() - 2;
    res.moves = moves;
    res.used_flip_fallback = used_flip;
    return res;
  }
  throw std::runtime_error("convexify_arch: no staging height certified (" +
                           last_failure + ")");
}

}  // namespace

double choose_epsilon(const ChainConfig& polygon) {
  return convexify_with_retries(polygon).epsilon;
}

BarbedConvexifyResult convexify_barbed(const ChainConfig& barbed,
                                       int apex_index, double plane_z) {
  if (!barbed.closed)
    throw std::invalid_argument("convexify_barbed: closed polygon required");
  if (apex_index != barbed.vertex_count() - 1)
    throw std::invalid_argument(
        "convexify_barbed: apex must be the last vertex");
  Builder b;
  b.plan.initial = barbed;
  b.cur = barbed;
  barbed_phase(b, apex_index, plane_z);
  BarbedConvexifyResult res;
  res.moves = std::move(b.plan.moves);
  res.final_config = std::move(b.cur);
  res.used_flip_fallback = b.used_flip;
  return res;
}

ArchPlanResult convexify_arch(const ChainConfig& polygon) {
  return convexify_with_retries(polygon);
}

}  // namespace chains
