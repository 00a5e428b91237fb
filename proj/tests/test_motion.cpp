#include <doctest.h>

#include "chains/motion.hpp"
#include "chains/rng.hpp"

#include <cmath>

using namespace chains;

namespace {

ChainConfig pentagon_with_dent() {
  return make_chain(
      {{0, 0, 0}, {2, 1, 0}, {4, 0, 0}, {4, 4, 0}, {0, 4, 0}}, true);
}

bool monotone(const std::vector<double>& xs) {
  bool up = true, down = true;
  for (size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] < xs[i - 1] - 1e-12) up = false;
    if (xs[i] > xs[i - 1] + 1e-12) down = false;
  }
  return up || down;
}

}  // namespace

TEST_CASE("single-joint zero angle is the identity") {
  const ChainConfig cfg =
      make_chain({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {2, 1, 1}}, false);
  SingleJointMove m;
  m.joint = 1;
  m.axis_point = cfg.vertices[1];
  m.axis_dir = Vec3::UnitZ();
  m.angle = 0.0;
  for (double t : {0.0, 0.3, 1.0}) {
    const ChainConfig p = pose_at(m, cfg, t);
    for (int i = 0; i < cfg.vertex_count(); ++i)
      CHECK((p.vertices[i] - cfg.vertices[i]).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("subchain-about-line pi reflects the pocket apex") {
  const ChainConfig poly = pentagon_with_dent();
  SubchainAboutLineMove m{0, 2, M_PI};
  const ChainConfig out = pose_at(m, poly, 1.0);
  CHECK(out.vertices[1].x() == doctest::Approx(2.0));
  CHECK(out.vertices[1].y() == doctest::Approx(-1.0));
  CHECK(std::abs(out.vertices[1].z()) < 1e-12);
  // Everything else untouched.
  for (int i : {0, 2, 3, 4})
    CHECK((out.vertices[i] - poly.vertices[i]).norm() == doctest::Approx(0.0));
}

TEST_CASE("coupled-lift closes onto the vertical line above the base") {
  const ChainConfig cfg =
      make_chain({{0, 0, 0}, {1, 0, 0}, {1, 0, 1}}, false);
  CoupledLiftMove m{1};
  const ChainConfig out = pose_at(m, cfg, 1.0);
  CHECK((out.vertices[0] - Vec3(0, 0, 0)).norm() == doctest::Approx(0.0));
  CHECK((out.vertices[1] - Vec3(0, 0, 1)).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK((out.vertices[2] - Vec3(0, 0, 2)).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("link lengths preserved for every kind at random t") {
  Rng rng(41);
  const ChainConfig open_cfg =
      make_chain({{0, 0, 0}, {1, 0, 0.1}, {1.5, 0.8, 0}, {2.5, 0.9, 0.4}},
                 false);
  const std::vector<double> ref_open = open_cfg.link_lengths();

  std::vector<Move> moves;
  SingleJointMove sj;
  sj.joint = 1;
  sj.axis_point = open_cfg.vertices[1];
  sj.axis_dir = rng.unit_vector();
  sj.angle = rng.uniform(-2.0, 2.0);
  moves.push_back(sj);
  moves.push_back(SubchainAboutLineMove{0, 3, rng.uniform(-3.0, 3.0)});

  for (const Move& m : moves) {
    for (int k = 0; k < 100; ++k) {
      const ChainConfig p = pose_at(m, open_cfg, rng.uniform());
      const std::vector<double> lens = p.link_lengths();
      for (size_t i = 0; i < lens.size(); ++i)
        CHECK(std::abs(lens[i] - ref_open[i]) / ref_open[i] < 1e-12);
    }
  }

  // coupled-lift on a chain with a vertical suffix
  const ChainConfig lift_cfg = make_chain(
      {{0, 0, 0}, {0.9, 0.3, -0.2}, {0.9, 0.3, 0.8}, {0.9, 0.3, 1.3}}, false);
  const std::vector<double> ref_lift = lift_cfg.link_lengths();
  for (int k = 0; k < 100; ++k) {
    const ChainConfig p = pose_at(CoupledLiftMove{1}, lift_cfg, rng.uniform());
    const std::vector<double> lens = p.link_lengths();
    for (size_t i = 0; i < lens.size(); ++i)
      CHECK(std::abs(lens[i] - ref_lift[i]) / ref_lift[i] < 1e-12);
  }
}

TEST_CASE("four-bar closure preserves lengths and is monotone") {
  const ChainConfig quad =
      make_chain({{0, 0, 0}, {1.2, 0, 0}, {1.4, 1.1, 0}, {0, 1, 0}}, true);
  FourBarMove m;
  m.joints = {0, 1, 2, 3};
  m.axis_point = quad.vertices[3];
  m.axis_dir = Vec3::UnitZ();
  m.angle = 0.6;
  m.plane_point = Vec3::Zero();
  m.plane_normal = Vec3::UnitZ();

  const std::vector<double> ref = quad.link_lengths();
  std::vector<double> drive_angle, driven_angle;
  for (int k = 0; k <= 100; ++k) {
    const double t = k / 100.0;
    const ChainConfig p = pose_at(m, quad, t);
    const std::vector<double> lens = p.link_lengths();
    for (size_t i = 0; i < lens.size(); ++i)
      CHECK(std::abs(lens[i] - ref[i]) / ref[i] < 1e-12);
    drive_angle.push_back(joint_angle(p, 3));
    driven_angle.push_back(joint_angle(p, 1));
  }
  CHECK(monotone(drive_angle));
  CHECK(monotone(driven_angle));
}

TEST_CASE("four-bar unreachable closure throws a descriptive error") {
  // Swinging v_2 about v_3 to (0, 3) puts it at distance 3 from v_0,
  // beyond the linkage reach |v0 v1| + |v1 v2| = 1 + sqrt(2).
  const ChainConfig quad =
      make_chain({{0, 0, 0}, {1, 0, 0}, {2, 1, 0}, {0, 1, 0}}, true);
  FourBarMove m;
  m.joints = {0, 1, 2, 3};
  m.axis_point = quad.vertices[3];
  m.axis_dir = Vec3::UnitZ();
  m.angle = M_PI / 2;
  m.plane_normal = Vec3::UnitZ();
  CHECK_THROWS_AS((void)pose_at(m, quad, 1.0), FourBarClosureError);
}

TEST_CASE("apply: empty plan and involution") {
  const ChainConfig poly = pentagon_with_dent();
  MotionPlan empty{poly, {}, {}};
  const ChainConfig same = apply(empty);
  for (int i = 0; i < poly.vertex_count(); ++i)
    CHECK((same.vertices[i] - poly.vertices[i]).norm() == 0.0);

  MotionPlan flip_twice{poly,
                        {SubchainAboutLineMove{0, 2, M_PI},
                         SubchainAboutLineMove{0, 2, -M_PI}},
                        {}};
  const ChainConfig back = apply(flip_twice);
  for (int i = 0; i < poly.vertex_count(); ++i)
    CHECK((back.vertices[i] - poly.vertices[i]).norm() <
          1e-9 * poly.diameter());
}

TEST_CASE("validate certifies zero-angle plans with zero drift") {
  const ChainConfig poly = pentagon_with_dent();
  MotionPlan plan{poly, {SubchainAboutLineMove{0, 2, 0.0}}, {}};
  const ValidationReport rep = validate(plan);
  CHECK(rep.certified);
  REQUIRE(rep.per_move.size() == 1);
  CHECK(rep.per_move[0].max_length_drift == 0.0);
}

TEST_CASE("validate certifies a correct pocket flip") {
  const ChainConfig poly = pentagon_with_dent();
  MotionPlan plan{poly, {SubchainAboutLineMove{0, 2, M_PI}}, {}};
  const ValidationReport rep = validate(plan);
  CHECK(rep.certified);
}

TEST_CASE("validate rejects a crossing sweep") {
  // Rotating vertex 3 of the dented pentagon about the (4,0)-(0,4)
  // diagonal lands it on vertex 0: a deliberate clearance violation.
  const ChainConfig poly = pentagon_with_dent();
  MotionPlan plan{poly, {SubchainAboutLineMove{2, 4, M_PI}}, {}};
  const ValidationReport rep = validate(plan);
  CHECK_FALSE(rep.certified);
  CHECK(!rep.first_failure.empty());
}
