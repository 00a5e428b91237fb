// Acceptance gate: each criterion prints exactly one PASS/FAIL line with
// its measured numbers. Exit 0 iff all pass.

#include "chains/arch.hpp"
#include "chains/flips.hpp"
#include "chains/io.hpp"
#include "chains/needles.hpp"
#include "chains/rng.hpp"
#include "chains/straighten.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace chains;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ChainConfig random_lifted_zigzag(int links, Rng& rng) {
  std::vector<Vec3> verts;
  double x = 0.0;
  for (int i = 0; i <= links; ++i) {
    verts.emplace_back(x, rng.uniform(-0.6, 0.6), rng.uniform(-0.8, 0.8));
    x += rng.uniform(0.5, 1.5);
  }
  return make_chain(std::move(verts), false);
}

ChainConfig random_star_polygon(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> angles(n);
  for (double& a : angles) a = rng.uniform(0.0, 2.0 * M_PI);
  std::sort(angles.begin(), angles.end());
  for (int i = 0; i < n; ++i) {
    const double next = (i + 1 < n) ? angles[i + 1] : angles[0] + 2 * M_PI;
    if (next - angles[i] < 0.05) return random_star_polygon(n, seed + 100000);
  }
  std::vector<Vec3> verts;
  for (double a : angles) {
    const double r = rng.uniform(0.4, 1.0);
    verts.emplace_back(r * std::cos(a), r * std::sin(a), 0.0);
  }
  return make_chain(std::move(verts), true);
}

// Plans shipped by the planners during this run, re-checked in criterion 5.
std::vector<MotionPlan> g_shipped;

bool criterion1_straightening() {
  const auto t0 = Clock::now();
  long planned = 0;
  for (int n : {4, 8, 16, 32}) {
    Rng rng(1000 + n);
    for (int k = 0; k < 100; ++k) {
      const ChainConfig chain = random_lifted_zigzag(n, rng);
      MotionPlan plan;
      try {
        plan = straighten(chain);
      } catch (const std::exception& e) {
        std::printf("FAIL criterion 1 (straightening): n=%d k=%d threw: %s\n",
                    n, k, e.what());
        return false;
      }
      if (static_cast<int>(plan.moves.size()) > n) {
        std::printf("FAIL criterion 1 (straightening): n=%d k=%d used %zu "
                    "moves\n",
                    n, k, plan.moves.size());
        return false;
      }
      const ValidationReport rep = validate(plan);
      if (!rep.certified) {
        std::printf("FAIL criterion 1 (straightening): n=%d k=%d "
                    "uncertified: %s\n",
                    n, k, rep.first_failure.c_str());
        return false;
      }
      for (const MoveRecord& mr : rep.per_move)
        if (!(mr.max_length_drift < 1e-9) || !(mr.min_clearance > 0)) {
          std::printf("FAIL criterion 1 (straightening): n=%d k=%d drift=%g "
                      "clearance=%g\n",
                      n, k, mr.max_length_drift, mr.min_clearance);
          return false;
        }
      if (shape_classify(apply(plan)) != ShapeClass::kStraight) {
        std::printf("FAIL criterion 1 (straightening): n=%d k=%d not "
                    "straight\n",
                    n, k);
        return false;
      }
      ++planned;
      if (k < 3) g_shipped.push_back(plan);
    }
  }
  const double dt = seconds_since(t0);
  if (dt >= 10.0) {
    std::printf("FAIL criterion 1 (straightening): %.1f s >= 10 s\n", dt);
    return false;
  }
  std::printf("PASS criterion 1 (straightening): %ld chains certified "
              "straight in %.1f s\n",
              planned, dt);
  return true;
}

// Quadrilateral with one near-degenerate vertex: the second vertex
// collapses toward the first as delta -> 0 and the flip count climbs.
ChainConfig flip_family(double delta) {
  return make_chain({Vec3(0, 0, 0), Vec3(-0.45 * delta, 0.893 * delta, 0),
                     Vec3(3.97, -3.78, 0), Vec3(-10.56, 10.36, 0)},
                    true);
}

bool criterion2_flips() {
  for (int n = 4; n <= 12; ++n) {
    for (std::uint64_t seed = 1; seed <= (n <= 5 ? 14u : 11u); ++seed) {
      const ChainConfig poly = random_star_polygon(n, 10 * n + seed);
      const FlipConvexifyResult res = convexify_flips(poly);
      if (!res.convex) {
        std::printf("FAIL criterion 2 (flips): n=%d seed=%llu hit cap\n", n,
                    (unsigned long long)seed);
        return false;
      }
      // Area strictly increases per flip and perimeter is preserved; check
      // move by move.
      ChainConfig cur = poly;
      double area = std::abs(polygon_area(poly));
      double per0 = 0;
      for (double l : poly.link_lengths()) per0 += l;
      for (const Move& m : res.plan.moves) {
        cur = apply_move(m, cur);
        const double a2 = std::abs(polygon_area(cur));
        double per = 0;
        for (double l : cur.link_lengths()) per += l;
        if (!(a2 > area) || std::abs(per - per0) > 1e-12 * per0) {
          std::printf("FAIL criterion 2 (flips): n=%d seed=%llu area/perim "
                      "violated\n",
                      n, (unsigned long long)seed);
          return false;
        }
        area = a2;
      }
      const ValidationReport rep = validate(res.plan);
      if (!rep.certified) {
        std::printf("FAIL criterion 2 (flips): n=%d seed=%llu uncertified: "
                    "%s\n",
                    n, (unsigned long long)seed, rep.first_failure.c_str());
        return false;
      }
      if (seed == 1) g_shipped.push_back(res.plan);
    }
  }
  // Delta family: strictly increasing flip counts.
  std::vector<long> counts;
  for (double delta : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    const FlipConvexifyResult res = convexify_flips(flip_family(delta));
    if (!res.convex) {
      std::printf("FAIL criterion 2 (flips): delta=%g hit cap\n", delta);
      return false;
    }
    counts.push_back(res.flips);
  }
  for (size_t i = 1; i < counts.size(); ++i)
    if (counts[i] <= counts[i - 1]) {
      std::printf("FAIL criterion 2 (flips): delta family counts not "
                  "strictly increasing (%ld -> %ld)\n",
                  counts[i - 1], counts[i]);
      return false;
    }
  std::printf("PASS criterion 2 (flips): 100 polygons certified; delta "
              "family counts %ld %ld %ld %ld %ld %ld\n",
              counts[0], counts[1], counts[2], counts[3], counts[4],
              counts[5]);
  return true;
}

bool criterion3_arch() {
  const auto t0 = Clock::now();
  std::vector<double> log_n, log_moves;
  for (int n : {4, 6, 8, 12, 16}) {
    const ChainConfig poly = random_star_polygon(n, 7000 + n);
    ArchPlanResult res;
    try {
      res = convexify_arch(poly);
    } catch (const std::exception& e) {
      std::printf("FAIL criterion 3 (arch): n=%d threw: %s\n", n, e.what());
      return false;
    }
    if (res.rounds != n - 2) {
      std::printf("FAIL criterion 3 (arch): n=%d rounds=%d\n", n, res.rounds);
      return false;
    }
    if (shape_classify(apply(res.plan)) != ShapeClass::kConvexPlanar) {
      std::printf("FAIL criterion 3 (arch): n=%d not convex-planar\n", n);
      return false;
    }
    const ValidationReport rep = validate(res.plan);
    if (!rep.certified) {
      std::printf("FAIL criterion 3 (arch): n=%d uncertified: %s\n", n,
                  rep.first_failure.c_str());
      return false;
    }
    log_n.push_back(std::log(double(n)));
    log_moves.push_back(std::log(double(std::max(res.moves, 1L))));
    g_shipped.push_back(res.plan);
  }
  // Least-squares slope of log(moves) vs log(n).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = static_cast<int>(log_n.size());
  for (int i = 0; i < m; ++i) {
    sx += log_n[i];
    sy += log_moves[i];
    sxx += log_n[i] * log_n[i];
    sxy += log_n[i] * log_moves[i];
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double dt = seconds_since(t0);
  if (slope > 2.2) {
    std::printf("FAIL criterion 3 (arch): log-log slope %.2f > 2.2\n", slope);
    return false;
  }
  if (dt >= 60.0) {
    std::printf("FAIL criterion 3 (arch): %.1f s >= 60 s\n", dt);
    return false;
  }
  std::printf("PASS criterion 3 (arch): all certified, n-2 rounds, slope "
              "%.2f, %.1f s\n",
              slope, dt);
  return true;
}

bool criterion4_locked() {
  const NeedleParams params;
  const ChainConfig k = make_knitting_needles(params);
  const double min_link =
      std::min({params.l0, params.l1, params.l2, params.l3, params.l4});
  if (!is_simple(k).simple || !(min_clearance(k) >= 1e-3 * min_link)) {
    std::printf("FAIL criterion 4 (locked): needles not simple or too "
                "tight\n");
    return false;
  }
  const ExclusionReport ex = endpoint_exclusion_check(params, 10000, 42);
  if (ex.violations != 0) {
    std::printf("FAIL criterion 4 (locked): %ld exclusion violations\n",
                ex.violations);
    return false;
  }
  const ChainConfig doubled = make_locked_closed(params);
  Rng dir_rng(321);
  for (int i = 0; i < 3; ++i) {
    long det = -1;
    // A random direction may hit an irregular projection; retry nearby.
    for (int attempt = 0; attempt < 50 && det < 0; ++attempt) {
      try {
        det = knot_determinant_along(doubled, dir_rng.unit_vector());
      } catch (const std::exception&) {
      }
    }
    if (det != 3) {
      std::printf("FAIL criterion 4 (locked): doubled determinant %ld != 3\n",
                  det);
      return false;
    }
  }
  // Unknot control: a convex planar closed chain.
  const ChainConfig unknot = make_chain(
      {Vec3(0, 0, 0), Vec3(4, 0, 0.1), Vec3(5, 3, -0.1), Vec3(2, 5, 0.05),
       Vec3(-1, 3, 0)},
      true);
  if (knot_determinant(unknot) != 1) {
    std::printf("FAIL criterion 4 (locked): unknot control determinant != "
                "1\n");
    return false;
  }
  // Straighten attempts: K stalls, controls succeed.
  double k_floor = 1e300;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto rep = random_straighten_attempt(k, 30000, seed);
    k_floor = std::min(k_floor, rep.best_potential);
  }
  if (!(k_floor > 0.5)) {
    std::printf("FAIL criterion 4 (locked): needles descended to %.3f\n",
                k_floor);
    return false;
  }
  Rng crng(555);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ChainConfig control = random_lifted_zigzag(4, crng);
    const auto rep = random_straighten_attempt(control, 100000, seed);
    if (!(rep.best_potential < 0.1)) {
      std::printf("FAIL criterion 4 (locked): control seed %llu stalled at "
                  "%.3f\n",
                  (unsigned long long)seed, rep.best_potential);
      return false;
    }
  }
  std::printf("PASS criterion 4 (locked): clearance ok, 0/10000 exclusion "
              "violations, determinant 3 vs 1, needles floor %.2f\n",
              k_floor);
  return true;
}

bool criterion5_validator() {
  // Seeded crossing motions: close a planar joint past fold-back.
  Rng rng(777);
  for (int k = 0; k < 10; ++k) {
    ChainConfig chain;
    int joint = 0;
    do {
      chain = random_lifted_zigzag(4 + (k % 3), rng);
      joint = 1 + (k % (chain.vertex_count() - 2));
    } while (false);
    const Vec3 u = chain.vertices[joint - 1] - chain.vertices[joint];
    const Vec3 v = chain.vertices[joint + 1] - chain.vertices[joint];
    const Vec3 axis = u.cross(v).normalized();
    const double interior = joint_angle(chain, joint);
    // Close the joint through zero: guaranteed fold-back contact.
    SingleJointMove m;
    m.joint = joint;
    m.axis_point = chain.vertices[joint];
    m.axis_dir = axis;
    m.moving_side = MovingSide::kSuffix;
    m.angle = interior + 0.2;
    MotionPlan plan{chain, {m}, {}};
    // Pick the rotation sign that actually folds the joint shut: at
    // t = interior / (interior + 0.2) the joint angle should be ~0.
    const double t_fold = interior / m.angle;
    if (joint_angle(pose_at(m, chain, t_fold), joint) > 0.05) {
      m.angle = -m.angle;
      plan.moves[0] = m;
    }
    if (validate(plan).certified) {
      std::printf("FAIL criterion 5 (validator): crossing motion %d "
                  "certified\n",
                  k);
      return false;
    }
  }
  // 10x-density resampling of shipped plans.
  ValidatePolicy dense;
  dense.initial_samples = 640;
  for (size_t i = 0; i < g_shipped.size(); ++i) {
    const ValidationReport rep = validate(g_shipped[i], dense);
    if (!rep.certified) {
      std::printf("FAIL criterion 5 (validator): shipped plan %zu failed "
                  "dense resampling: %s\n",
                  i, rep.first_failure.c_str());
      return false;
    }
    for (const MoveRecord& mr : rep.per_move)
      if (!(mr.min_clearance > 0)) {
        std::printf("FAIL criterion 5 (validator): shipped plan %zu hit "
                    "clearance <= 0\n",
                    i);
        return false;
      }
  }
  std::printf("PASS criterion 5 (validator): 10/10 crossing motions "
              "rejected; %zu shipped plans pass 10x resampling\n",
              g_shipped.size());
  return true;
}

bool criterion6_determinism() {
  // Same input + seed twice, compare serialized plans byte for byte.
  Rng rng_a(99), rng_b(99);
  const ChainConfig ca = random_lifted_zigzag(8, rng_a);
  const ChainConfig cb = random_lifted_zigzag(8, rng_b);
  const std::string sa = plan_to_json(straighten(ca)).dump();
  const std::string sb = plan_to_json(straighten(cb)).dump();
  if (sa != sb) {
    std::printf("FAIL criterion 6 (determinism): straighten plans differ\n");
    return false;
  }
  const ChainConfig poly = random_star_polygon(9, 4242);
  const std::string fa = plan_to_json(convexify_flips(poly).plan).dump();
  const std::string fb = plan_to_json(convexify_flips(poly).plan).dump();
  if (fa != fb) {
    std::printf("FAIL criterion 6 (determinism): flip plans differ\n");
    return false;
  }
  const ChainConfig poly2 = random_star_polygon(6, 9001);
  const std::string aa = plan_to_json(convexify_arch(poly2).plan).dump();
  const std::string ab = plan_to_json(convexify_arch(poly2).plan).dump();
  if (aa != ab) {
    std::printf("FAIL criterion 6 (determinism): arch plans differ\n");
    return false;
  }
  std::printf("PASS criterion 6 (determinism): repeated runs produce "
              "bit-identical plan files\n");
  return true;
}

}  // namespace

int main() {
  int failures = 0;
  failures += !criterion1_straightening();
  failures += !criterion2_flips();
  failures += !criterion3_arch();
  failures += !criterion4_locked();
  failures += !criterion5_validator();
  failures += !criterion6_determinism();
  return failures == 0 ? 0 : 1;
}
