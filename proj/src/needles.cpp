#include "chains/needles.hpp"

#include "chains/rng.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace chains {

void NeedleParams::validate() const {
  for (double l : {l0, l1, l2, l3, l4, r})
    if (!(l > 0) || !std::isfinite(l))
      throw std::invalid_argument("needle params must be positive and finite");
  const double L = cord_length();
  if (!(r >= L))
    throw std::invalid_argument("needle params: need r >= L = l1+l2+l3");
  if (!(l0 > r)) throw std::invalid_argument("needle params: need l0 > r");
  if (!(l4 > r + L))
    throw std::invalid_argument("needle params: need l4 > r + L");
}

namespace {

// Unit directions of the frozen embedding, d_i = direction of edge e_i.
// The cord interweaves the two needles so that the doubled closed chain is
// a certified trefoil (determinant 3); the coordinates themselves are an
// implementation artifact pinned by the simplicity and determinant tests.
Vec3 needle_direction(int i) {
  static const Vec3 dirs[5] = {
      Vec3(-0.97994692297103247, 0.17679824139682762,
           0.091904352446411902),  // e_0, left needle
      Vec3(-0.29615136703783795, 0.37784612194734424,
           0.8772266958608661),  // cord, up
      Vec3(0.2516525683668186, 0.6049921168676351,
           -0.75541744973385505),  // cord, across and down
      Vec3(-0.69956677902477904, -0.62303924741152272,
           0.34989772487082482),  // cord, back under
      Vec3(0.94203439677696144, -0.29069484434680803,
           -0.16753418385288238),  // e_4, right needle
  };
  return dirs[i];
}

const Vec3 kDoublingOffsetDir(0.036025962206128269, -0.59874017188657891,
                              0.80013269937951703);

}  // namespace

ChainConfig make_knitting_needles(const NeedleParams& params) {
  params.validate();
  const double ls[5] = {params.l0, params.l1, params.l2, params.l3,
                        params.l4};
  std::vector<Vec3> verts(6);
  verts[1] = Vec3::Zero();                       // ball center
  verts[0] = verts[1] - ls[0] * needle_direction(0);
  for (int i = 1; i < 5; ++i)
    verts[i + 1] = verts[i] + ls[i] * needle_direction(i);
  ChainConfig chain = make_chain(std::move(verts), false);
  const double min_link = *std::min_element(std::begin(ls), std::end(ls));
  if (!(min_clearance(chain) >= 1e-3 * min_link))
    throw std::logic_error("knitting needles construction lost clearance");
  return chain;
}

ChainConfig make_locked_closed(const NeedleParams& params, double offset) {
  if (!(offset > 0))
    throw std::invalid_argument("doubling offset must be positive");
  const ChainConfig k = make_knitting_needles(params);
  const Vec3 delta = offset * kDoublingOffsetDir;
  std::vector<Vec3> verts = k.vertices;
  for (int i = k.vertex_count() - 1; i >= 0; --i)
    verts.push_back(k.vertices[i] + delta);
  ChainConfig doubled = make_chain(std::move(verts), true);
  const SimplicityResult s = is_simple(doubled);
  if (!s.simple) {
    std::ostringstream msg;
    msg << "doubled chain is not simple at offset " << offset << " (edges "
        << s.witness.edge1 << ", " << s.witness.edge2 << ")";
    throw std::invalid_argument(msg.str());
  }
  // The copy must thread the cord gaps; too-large offsets lose the knot.
  const long det = knot_determinant(doubled);
  if (det != 3) {
    std::ostringstream msg;
    msg << "doubled chain is not a trefoil at offset " << offset
        << " (determinant " << det << ")";
    throw std::invalid_argument(msg.str());
  }
  return doubled;
}

ChainConfig make_locked_closed(const NeedleParams& params) {
  const double min_link = std::min(
      {params.l0, params.l1, params.l2, params.l3, params.l4});
  return make_locked_closed(params, 0.02 * min_link);
}

ExclusionReport endpoint_exclusion_check(const NeedleParams& params,
                                         long trials, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  ExclusionReport rep;
  rep.trials = trials;
  for (long t = 0; t < trials; ++t) {
    const Vec3 v1 = Vec3::Zero();
    const Vec3 v0 = v1 + params.l0 * rng.unit_vector();
    const Vec3 v2 = v1 + params.l1 * rng.unit_vector();
    const Vec3 v3 = v2 + params.l2 * rng.unit_vector();
    const Vec3 v4 = v3 + params.l3 * rng.unit_vector();
    const Vec3 v5 = v4 + params.l4 * rng.unit_vector();
    const double m0 = (v0 - v1).norm() - params.r;
    const double m5 = (v5 - v1).norm() - params.r;
    rep.min_margin_v0 = std::min(rep.min_margin_v0, m0);
    rep.min_margin_v5 = std::min(rep.min_margin_v5, m5);
    if (m0 <= 0 || m5 <= 0) ++rep.violations;
  }
  return rep;
}

namespace {

struct RegularityFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Crossing {
  int over_arc = -1;
  int under_in_arc = -1;
  int under_out_arc = -1;
};

// One passage of the curve through a crossing point.
struct Passage {
  int edge;
  double param;
  int crossing;
  bool under;
};

long coloring_matrix_determinant(const std::vector<Crossing>& crossings) {
  using Big = boost::multiprecision::cpp_int;
  const int n = static_cast<int>(crossings.size());
  if (n == 0) return 1;
  std::vector<std::vector<Big>> m(n, std::vector<Big>(n, 0));
  for (int c = 0; c < n; ++c) {
    m[c][crossings[c].over_arc] += 2;
    m[c][crossings[c].under_in_arc] -= 1;
    m[c][crossings[c].under_out_arc] -= 1;
  }
  // Any (n-1)x(n-1) minor; drop the last row and column. Bareiss
  // fraction-free elimination keeps everything integral.
  const int k = n - 1;
  if (k == 0) return 1;
  Big prev = 1;
  for (int p = 0; p < k - 1; ++p) {
    if (m[p][p] == 0) {
      int swap_row = -1;
      for (int r2 = p + 1; r2 < k; ++r2)
        if (m[r2][p] != 0) {
          swap_row = r2;
          break;
        }
      if (swap_row < 0) return 0;
      std::swap(m[p], m[swap_row]);
      for (auto& row : m) row[p] = -row[p];  // keep the determinant sign
    }
    for (int r2 = p + 1; r2 < k; ++r2)
      for (int c2 = p + 1; c2 < k; ++c2)
        m[r2][c2] = (m[r2][c2] * m[p][p] - m[r2][p] * m[p][c2]) / prev;
    prev = m[p][p];
  }
  Big det = m[k - 1][k - 1];
  if (det < 0) det = -det;
  if (det > std::numeric_limits<long>::max())
    throw std::runtime_error("knot determinant overflow");
  return static_cast<long>(det);
}

long determinant_of_diagram(const ChainConfig& cfg, const Vec3& dir) {
  // In-plane basis and depth along the viewing direction.
  const Vec3 u = dir.unitOrthogonal();
  const Vec3 v = dir.cross(u);
  const int m = cfg.edge_count();
  const double scale = std::max(cfg.diameter(), 1e-300);
  const double tol = 1e-9 * scale;

  std::vector<Vec2> p2(m + 1);
  std::vector<double> depth(m + 1);
  for (int i = 0; i <= m; ++i) {
    const Vec3& p = cfg.vertices[i % cfg.vertex_count()];
    p2[i] = Vec2(p.dot(u), p.dot(v));
    depth[i] = p.dot(dir);
  }

  for (int i = 0; i < m; ++i)
    if ((p2[i + 1] - p2[i]).norm() < 1e-6 * scale)
      throw RegularityFailure("edge nearly parallel to viewing direction");

  std::vector<Passage> passages;
  int crossing_count = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == m - 1);
      const Vec2 a = p2[i], b = p2[i + 1], c = p2[j], d = p2[j + 1];
      const Vec2 r = b - a, s = d - c;
      const double den = r.x() * s.y() - r.y() * s.x();
      if (std::abs(den) < 1e-12 * scale * scale) {
        // Parallel projections: regular iff they stay apart.
        if (!adjacent &&
            seg_seg_distance3({Vec3(a.x(), a.y(), 0), Vec3(b.x(), b.y(), 0)},
                              {Vec3(c.x(), c.y(), 0), Vec3(d.x(), d.y(), 0)}) <
                tol)
          throw RegularityFailure("parallel overlapping projections");
        continue;
      }
      const Vec2 ca = c - a;
      const double t1 = (ca.x() * s.y() - ca.y() * s.x()) / den;
      const double t2 = (ca.x() * r.y() - ca.y() * r.x()) / den;
      const double eps = 1e-9;
      const bool inside1 = t1 > eps && t1 < 1 - eps;
      const bool inside2 = t2 > eps && t2 < 1 - eps;
      const bool outside1 = t1 < -eps || t1 > 1 + eps;
      const bool outside2 = t2 < -eps || t2 > 1 + eps;
      if (inside1 && inside2) {
        if (adjacent)
          throw RegularityFailure("adjacent edges cross in projection");
        const double z1 = depth[i] + t1 * (depth[i + 1] - depth[i]);
        const double z2 = depth[j] + t2 * (depth[j + 1] - depth[j]);
        if (std::abs(z1 - z2) < tol)
          throw RegularityFailure("crossing strands at equal depth");
        const int id = crossing_count++;
        passages.push_back({i, t1, id, z1 < z2});
        passages.push_back({j, t2, id, z2 < z1});
      } else if (!(outside1 || outside2)) {
        if (!adjacent)
          throw RegularityFailure("near-tangential or endpoint contact");
      }
    }
  }

  if (crossing_count == 0) return 1;

  std::sort(passages.begin(), passages.end(), [](const Passage& x,
                                                 const Passage& y) {
    if (x.edge != y.edge) return x.edge < y.edge;
    return x.param < y.param;
  });

  // Arcs: pieces of the closed curve between consecutive under-passages.
  // Passage k lies on arc (#unders strictly before k) mod (#crossings),
  // which wraps the tail back onto the head arc.
  const int total = static_cast<int>(passages.size());
  std::vector<Crossing> crossings(crossing_count);
  int unders_before = 0;
  for (int k = 0; k < total; ++k) {
    const Passage& pas = passages[k];
    const int arc_here = unders_before % crossing_count;
    if (pas.under) {
      crossings[pas.crossing].under_in_arc = arc_here;
      crossings[pas.crossing].under_out_arc =
          (unders_before + 1) % crossing_count;
      ++unders_before;
    } else {
      crossings[pas.crossing].over_arc = arc_here;
    }
  }
  return coloring_matrix_determinant(crossings);
}

}  // namespace

long knot_determinant_along(const ChainConfig& closed_config,
                            const Vec3& direction) {
  if (!closed_config.closed)
    throw std::invalid_argument("knot_determinant: chain must be closed");
  return determinant_of_diagram(closed_config, direction.normalized());
}

long knot_determinant(const ChainConfig& closed_config) {
  if (!closed_config.closed)
    throw std::invalid_argument("knot_determinant: chain must be closed");
  const SimplicityResult s = is_simple(closed_config);
  if (!s.simple)
    throw std::invalid_argument("knot_determinant: chain must be simple");

  // Compute along three independent regular directions and require
  // agreement (the determinant is a diagram invariant).
  Rng rng(0x6b6e6f74);
  std::vector<long> values;
  int attempts = 0;
  while (values.size() < 3 && attempts < 300) {
    ++attempts;
    const Vec3 dir = rng.unit_vector();
    try {
      values.push_back(determinant_of_diagram(closed_config, dir));
    } catch (const RegularityFailure&) {
      continue;
    }
  }
  if (values.size() < 3)
    throw std::runtime_error(
        "knot_determinant: no regular projection found within budget");
  if (values[0] != values[1] || values[1] != values[2])
    throw std::logic_error("knot_determinant: projections disagree");
  return values[0];
}

StraightenAttemptReport random_straighten_attempt(const ChainConfig& config,
                                                  long budget,
                                                  std::uint64_t seed) {
  if (config.closed)
    throw std::invalid_argument("random_straighten_attempt: open chains only");
  Rng rng(seed);
  const int n = config.vertex_count();

  auto potential = [&](const ChainConfig& c) {
    double total = 0.0;
    for (int i = 1; i + 1 < n; ++i) total += M_PI - joint_angle(c, i);
    return total;
  };

  StraightenAttemptReport rep;
  ChainConfig cur = config;
  rep.initial_potential = rep.best_potential = potential(cur);

  for (long it = 0; it < budget && rep.best_potential > 1e-3; ++it) {
    ++rep.moves_tried;
    const int i = rng.uniform_int(1, n - 2);
    const Vec3 u1 = cur.vertices[i - 1] - cur.vertices[i];
    const Vec3 u2 = cur.vertices[i + 1] - cur.vertices[i];
    Vec3 axis = u1.cross(u2);
    const double ext = M_PI - joint_angle(cur, i);
    if (ext < 1e-9) continue;
    if (axis.norm() < 1e-12 * u1.norm() * u2.norm()) {
      axis = u1.unitOrthogonal();  // doubled-back joint: any bend plane
    }
    axis.normalize();
    // Rotating the suffix about the bend-plane normal changes only this
    // joint's angle; pick the sign that opens it.
    double step = std::min(ext, rng.uniform(0.0, 0.3));
    SingleJointMove m;
    m.joint = i;
    m.axis_point = cur.vertices[i];
    m.axis_dir = axis;
    m.moving_side = MovingSide::kSuffix;
    m.angle = step;
    ChainConfig cand = apply_move(m, cur);
    if (joint_angle(cand, i) < joint_angle(cur, i)) {
      m.angle = -step;
      cand = apply_move(m, cur);
    }
    // Conservative certification of the small move.
    const double c = min_clearance(cur);
    const double disp = displacement_bound(m, cur, cand);
    if (!(disp < c / 2)) continue;
    if (!(min_clearance(cand) > 0)) continue;
    const double pot = potential(cand);
    if (pot < rep.best_potential - 1e-12) {
      cur = std::move(cand);
      rep.best_potential = pot;
      ++rep.moves_accepted;
    }
  }
  return rep;
}

}  // namespace chains
