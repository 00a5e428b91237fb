#include "chains/motion.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <sstream>

namespace chains {
namespace {

Vec3 rotate_about(const Vec3& p, const Vec3& axis_point, const Vec3& axis_dir,
                  double angle) {
  return axis_point +
         Eigen::AngleAxisd(angle, axis_dir.normalized()) * (p - axis_point);
}

// Indices strictly between a and b walking forward (cyclically when
// closed).
std::vector<int> interior_indices(const ChainConfig& cfg, int a, int b) {
  std::vector<int> out;
  const int n = cfg.vertex_count();
  for (int k = (a + 1) % n; k != b; k = (k + 1) % n) {
    out.push_back(k);
    if (!cfg.closed && k + 1 >= n) break;
  }
  return out;
}

ChainConfig pose_single_joint(const SingleJointMove& m, const ChainConfig& cfg,
                              double t) {
  if (cfg.closed)
    throw std::invalid_argument("single-joint move needs an open chain");
  if (m.joint <= 0 || m.joint >= cfg.vertex_count() - 1)
    throw std::invalid_argument("single-joint move: joint out of range");
  ChainConfig out = cfg;
  const double ang = m.angle * t;
  if (m.moving_side == MovingSide::kSuffix) {
    for (int k = m.joint + 1; k < cfg.vertex_count(); ++k)
      out.vertices[k] = rotate_about(cfg.vertices[k], m.axis_point, m.axis_dir, ang);
  } else {
    for (int k = 0; k < m.joint; ++k)
      out.vertices[k] = rotate_about(cfg.vertices[k], m.axis_point, m.axis_dir, ang);
  }
  return out;
}

ChainConfig pose_subchain(const SubchainAboutLineMove& m, const ChainConfig& cfg,
                          double t) {
  const int n = cfg.vertex_count();
  if (m.a < 0 || m.a >= n || m.b < 0 || m.b >= n || m.a == m.b)
    throw std::invalid_argument("subchain-about-line: bad vertex indices");
  const Vec3 axis_point = cfg.vertices[m.a];
  const Vec3 axis = cfg.vertices[m.b] - cfg.vertices[m.a];
  if (axis.norm() == 0)
    throw std::invalid_argument("subchain-about-line: coincident endpoints");
  ChainConfig out = cfg;
  for (int k : interior_indices(cfg, m.a, m.b))
    out.vertices[k] =
        rotate_about(cfg.vertices[k], axis_point, axis, m.angle * t);
  return out;
}

ChainConfig pose_coupled_lift(const CoupledLiftMove& m, const ChainConfig& cfg,
                              double t) {
  if (cfg.closed)
    throw std::invalid_argument("coupled-lift needs an open chain");
  const int n = cfg.vertex_count();
  if (m.joint < 1 || m.joint >= n)
    throw std::invalid_argument("coupled-lift: joint out of range");
  const Vec3 base = cfg.vertices[m.joint - 1];
  const Vec3 e = cfg.vertices[m.joint] - base;
  const double len = e.norm();
  const double tol = 1e-6 * std::max(cfg.diameter(), 1e-300);
  // The suffix beyond the joint must already be a vertical segment.
  for (int k = m.joint + 1; k < n; ++k) {
    const Vec3 d = cfg.vertices[k] - cfg.vertices[k - 1];
    if (Vec2(d.x(), d.y()).norm() > tol || d.z() <= 0)
      throw std::invalid_argument("coupled-lift: suffix is not vertical");
  }
  const Vec2 h(e.x(), e.y());
  const double hn = h.norm();
  if (hn <= tol) return cfg;  // already vertical
  const Vec3 u(h.x() / hn, h.y() / hn, 0.0);
  const double phi0 = std::atan2(hn, e.z());
  const double phi = phi0 * (1.0 - t);
  ChainConfig out = cfg;
  out.vertices[m.joint] =
      base + len * (std::sin(phi) * u + std::cos(phi) * Vec3::UnitZ());
  double cum = 0.0;
  for (int k = m.joint + 1; k < n; ++k) {
    cum += (cfg.vertices[k] - cfg.vertices[k - 1]).norm();
    out.vertices[k] = out.vertices[m.joint] + cum * Vec3::UnitZ();
  }
  return out;
}

// In-plane rigid map sending (a0, b0) to (a1, b1); rotation about `normal`.
struct PlanarMap {
  Eigen::Matrix3d rot;
  Vec3 a0, a1;
  Vec3 operator()(const Vec3& x) const { return a1 + rot * (x - a0); }
};

PlanarMap planar_map(const Vec3& a0, const Vec3& b0, const Vec3& a1,
                     const Vec3& b1, const Vec3& normal) {
  const Vec3 n = normal.normalized();
  const Vec3 u0 = (b0 - a0).normalized();
  const Vec3 u1 = (b1 - a1).normalized();
  const double cosang = std::clamp(u0.dot(u1), -1.0, 1.0);
  const double sinang = n.dot(u0.cross(u1));
  const double ang = std::atan2(sinang, cosang);
  return {Eigen::AngleAxisd(ang, n).toRotationMatrix(), a0, a1};
}

// Re-seats interior vertices of a rigid planar block in the vertical
// halfplane above its (non-vertical) base chord.
void reseat_vertical_block(const ChainConfig& cfg, const std::vector<int>& ids,
                           const Vec3& a0, const Vec3& b0, const Vec3& a1,
                           const Vec3& b1, ChainConfig& out) {
  auto frame = [](const Vec3& a, const Vec3& b) {
    const Vec3 x = (b - a).normalized();
    Vec3 y = Vec3::UnitZ() - Vec3::UnitZ().dot(x) * x;
    const double yn = y.norm();
    if (yn == 0)
      throw std::invalid_argument("vertical block base became vertical");
    y /= yn;
    return std::array<Vec3, 3>{x, y, x.cross(y)};
  };
  const auto f0 = frame(a0, b0);
  const auto f1 = frame(a1, b1);
  for (int k : ids) {
    const Vec3 rel = cfg.vertices[k] - a0;
    const Vec3 local(rel.dot(f0[0]), rel.dot(f0[1]), rel.dot(f0[2]));
    out.vertices[k] =
        a1 + local.x() * f1[0] + local.y() * f1[1] + local.z() * f1[2];
  }
}

// Intersection of two spheres with a plane: circle-circle in the plane.
struct PlaneBasis {
  Vec3 origin, u, v, n;
  Vec2 to2(const Vec3& p) const {
    const Vec3 r = p - origin;
    return Vec2(r.dot(u), r.dot(v));
  }
  Vec3 to3(const Vec2& p) const { return origin + p.x() * u + p.y() * v; }
};

ChainConfig pose_four_bar(const FourBarMove& m, const ChainConfig& cfg,
                          double t) {
  if (!cfg.closed)
    throw std::invalid_argument("four-bar move needs a closed chain");
  const int j0 = m.joints[0], j1 = m.joints[1], j2 = m.joints[2],
            j3 = m.joints[3];
  const Vec3 p0 = cfg.vertices[j0];
  const Vec3 q0 = cfg.vertices[j1];
  const Vec3 p2_start = cfg.vertices[j2];
  const double d01 = (q0 - p0).norm();
  const double d12 = (q0 - p2_start).norm();
  const double scale = std::max(cfg.diameter(), 1e-300);

  PlaneBasis basis;
  basis.origin = m.plane_point;
  basis.n = m.plane_normal.normalized();
  basis.u = basis.n.unitOrthogonal();
  basis.v = basis.n.cross(basis.u);

  auto circle_center_radius = [&](const Vec3& center, double R,
                                  Vec2* c2, double* r2) -> bool {
    const double h = (center - basis.origin).dot(basis.n);
    const double rr = R * R - h * h;
    if (rr < -1e-12 * scale * scale) return false;
    *c2 = basis.to2(center);
    *r2 = std::sqrt(std::max(rr, 0.0));
    return true;
  };

  Vec2 ca;
  double ra;
  if (!circle_center_radius(p0, d01, &ca, &ra))
    throw FourBarClosureError("four-bar: joint 1 sphere misses closure plane");

  // March from 0 to t, resolving the closure branch by continuity.
  const int substeps =
      std::clamp(static_cast<int>(std::ceil(std::abs(m.angle * t) / 0.01)), 8,
                 8192);
  Vec2 q_prev = basis.to2(q0);
  Vec2 q_cur = q_prev;
  for (int s = 1; s <= substeps; ++s) {
    const double tau = t * s / substeps;
    const Vec3 p2 =
        rotate_about(p2_start, m.axis_point, m.axis_dir, m.angle * tau);
    Vec2 cb;
    double rb;
    if (!circle_center_radius(p2, d12, &cb, &rb)) {
      std::ostringstream msg;
      msg << "four-bar closure unreachable at t=" << tau
          << " (driven block left the closure plane's reach)";
      throw FourBarClosureError(msg.str());
    }
    const Vec2 delta = cb - ca;
    const double d = delta.norm();
    if (d == 0) throw FourBarClosureError("four-bar: coincident pivots");
    const double x = (d * d + ra * ra - rb * rb) / (2 * d);
    double y2 = ra * ra - x * x;
    if (y2 < -1e-9 * scale * scale) {
      std::ostringstream msg;
      msg << "four-bar closure unreachable at t=" << tau << " (joint "
          << j1 << " cannot satisfy both link constraints)";
      throw FourBarClosureError(msg.str());
    }
    const double y = std::sqrt(std::max(y2, 0.0));
    const Vec2 ex = delta / d;
    const Vec2 ey(-ex.y(), ex.x());
    const Vec2 cand1 = ca + x * ex + y * ey;
    const Vec2 cand2 = ca + x * ex - y * ey;
    const Vec2 pick =
        ((cand1 - q_prev).norm() <= (cand2 - q_prev).norm()) ? cand1 : cand2;
    // A near-singular alignment where both branches collapse and the next
    // sample would be ambiguous is treated as a branch jump.
    if (y < 1e-12 * scale && s < substeps &&
        (pick - q_prev).norm() > 0.05 * scale)
      throw FourBarClosureError("four-bar: branch jump at alignment");
    q_prev = q_cur = pick;
  }

  const Vec3 p2_t = rotate_about(p2_start, m.axis_point, m.axis_dir, m.angle * t);
  const Vec3 q_t = basis.to3(q_cur);

  ChainConfig out = cfg;
  // Driven block [j2 .. j3] rotates about the axis.
  for (int k : interior_indices(cfg, j2, j3))
    out.vertices[k] =
        rotate_about(cfg.vertices[k], m.axis_point, m.axis_dir, m.angle * t);
  out.vertices[j2] = p2_t;
  out.vertices[j1] = q_t;
  // Coupler block (j1 .. j2) and rocker block (j0 .. j1).
  const auto coupler_ids = interior_indices(cfg, j1, j2);
  const auto rocker_ids = interior_indices(cfg, j0, j1);
  if (m.orientation == FourBarOrientation::kInPlane) {
    if (!coupler_ids.empty()) {
      const PlanarMap f = planar_map(q0, p2_start, q_t, p2_t, basis.n);
      for (int k : coupler_ids) out.vertices[k] = f(cfg.vertices[k]);
    }
    if (!rocker_ids.empty()) {
      const PlanarMap f = planar_map(p0, q0, p0, q_t, basis.n);
      for (int k : rocker_ids) out.vertices[k] = f(cfg.vertices[k]);
    }
  } else {
    if (!coupler_ids.empty())
      reseat_vertical_block(cfg, coupler_ids, q0, p2_start, q_t, p2_t, out);
    if (!rocker_ids.empty())
      reseat_vertical_block(cfg, rocker_ids, p0, q0, p0, q_t, out);
  }
  return out;
}

}  // namespace

const char* kind_name(const Move& move) {
  switch (move.index()) {
    case 0: return "single-joint";
    case 1: return "subchain-about-line";
    case 2: return "coupled-lift";
    case 3: return "four-bar";
  }
  return "?";
}

ChainConfig pose_at(const Move& move, const ChainConfig& config, double t) {
  t = std::clamp(t, 0.0, 1.0);
  return std::visit(
      [&](const auto& m) -> ChainConfig {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SingleJointMove>)
          return pose_single_joint(m, config, t);
        else if constexpr (std::is_same_v<T, SubchainAboutLineMove>)
          return pose_subchain(m, config, t);
        else if constexpr (std::is_same_v<T, CoupledLiftMove>)
          return pose_coupled_lift(m, config, t);
        else
          return pose_four_bar(m, config, t);
      },
      move);
}

ChainConfig apply_move(const Move& move, const ChainConfig& config) {
  return pose_at(move, config, 1.0);
}

ChainConfig apply(const MotionPlan& plan) {
  ChainConfig cfg = plan.initial;
  for (const Move& m : plan.moves) cfg = apply_move(m, cfg);
  return cfg;
}

double displacement_bound(const Move& move, const ChainConfig& at_t,
                          const ChainConfig& at_t_plus_dt) {
  // Every move kind is (a composition of) monotone rotations; for single
  // rotations the distance from the step-start position is monotone in
  // time, so the endpoint displacement bounds the whole step. Four-bar
  // couplers compose two rotations; a factor of 2 covers the mid-step
  // excursion.
  const double kappa =
      std::holds_alternative<FourBarMove>(move) ? 2.0 : 1.0;
  double d = 0.0;
  for (int i = 0; i < at_t.vertex_count(); ++i)
    d = std::max(d, (at_t_plus_dt.vertices[i] - at_t.vertices[i]).norm());
  return kappa * d;
}

ValidationReport validate(const MotionPlan& plan, const ValidatePolicy& policy) {
  ValidationReport report;
  const std::vector<double> ref_lengths = plan.initial.link_lengths();
  const double scale = std::max(plan.initial.diameter(), 1e-300);
  const double tol = policy.tolerance * scale;

  auto check_lengths = [&](const ChainConfig& cfg, double* drift) {
    const std::vector<double> cur = cfg.link_lengths();
    double worst = 0.0;
    for (size_t i = 0; i < cur.size(); ++i)
      worst = std::max(worst, std::abs(cur[i] - ref_lengths[i]) / ref_lengths[i]);
    *drift = worst;
    return worst <= 1e-9;
  };

  ChainConfig cfg = plan.initial;
  for (size_t mi = 0; mi < plan.moves.size(); ++mi) {
    const Move& move = plan.moves[mi];
    const ChainConfig move_start = cfg;
    MoveRecord rec;
    rec.move_index = static_cast<int>(mi);

    double t = 0.0;
    double dt = 1.0 / policy.initial_samples;
    long steps = 0;
    ChainConfig cur = move_start;
    while (t < 1.0) {
      dt = std::min(dt, 1.0 - t);
      ClearanceWitness w;
      const double c = min_clearance(cur, plan.exemptions, &w);
      rec.min_clearance = std::min(rec.min_clearance, c);
      if (!(c > tol) || w.fold_back) {
        std::ostringstream msg;
        msg << "move " << mi << " (" << kind_name(move) << ") t=" << t
            << ": clearance violation between edges " << w.edge1 << " and "
            << w.edge2 << " (distance " << w.distance
            << (w.fold_back ? ", fold-back)" : ")");
        report.first_failure = msg.str();
        report.per_move.push_back(rec);
        return report;
      }
      ChainConfig next;
      try {
        next = pose_at(move, move_start, t + dt);
      } catch (const FourBarClosureError& e) {
        report.first_failure =
            "move " + std::to_string(mi) + ": " + e.what();
        report.per_move.push_back(rec);
        return report;
      }
      const double disp = displacement_bound(move, cur, next);
      if (disp < c / 2) {
        double drift = 0.0;
        if (!check_lengths(next, &drift)) {
          std::ostringstream msg;
          msg << "move " << mi << " t=" << (t + dt)
              << ": link length drift " << drift << " exceeds 1e-9";
          report.first_failure = msg.str();
          report.per_move.push_back(rec);
          return report;
        }
        rec.max_length_drift = std::max(rec.max_length_drift, drift);
        rec.min_margin = std::min(rec.min_margin, c / 2 - disp);
        cur = std::move(next);
        t += dt;
        dt = std::min(dt * 2, 1.0 / policy.initial_samples);
      } else {
        dt /= 2;
      }
      if (++steps > policy.max_steps) {
        report.first_failure = "move " + std::to_string(mi) +
                               ": sample budget exhausted before certification";
        report.per_move.push_back(rec);
        return report;
      }
      rec.samples = steps;
    }
    // Terminal clearance of the move.
    ClearanceWitness w;
    const double c_end = min_clearance(cur, plan.exemptions, &w);
    rec.min_clearance = std::min(rec.min_clearance, c_end);
    if (!(c_end > tol) || w.fold_back) {
      report.first_failure = "move " + std::to_string(mi) +
                             ": clearance violation at move end";
      report.per_move.push_back(rec);
      return report;
    }
    report.per_move.push_back(rec);
    cfg = cur;
  }
  report.certified = true;
  return report;
}

double joint_angle(const ChainConfig& config, int i) {
  const int n = config.vertex_count();
  const Vec3& v = config.vertices[i];
  const Vec3& a = config.vertices[(i - 1 + n) % n];
  const Vec3& b = config.vertices[(i + 1) % n];
  const Vec3 u1 = (a - v).normalized();
  const Vec3 u2 = (b - v).normalized();
  return std::acos(std::clamp(u1.dot(u2), -1.0, 1.0));
}

}  // namespace chains
