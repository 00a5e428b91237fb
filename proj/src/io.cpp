#include "chains/io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <stdexcept>

namespace chains {

using nlohmann::json;

namespace {

json vec_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from_json(const json& j) {
  if (!j.is_array() || j.size() < 2 || j.size() > 3)
    throw std::runtime_error("expected [x, y] or [x, y, z]");
  return Vec3(j[0].get<double>(), j[1].get<double>(),
              j.size() == 3 ? j[2].get<double>() : 0.0);
}

json move_to_json(const Move& move) {
  json j;
  j["kind"] = kind_name(move);
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SingleJointMove>) {
          j["joint"] = m.joint;
          j["axis_point"] = vec_to_json(m.axis_point);
          j["axis_dir"] = vec_to_json(m.axis_dir);
          j["moving_side"] =
              m.moving_side == MovingSide::kPrefix ? "prefix" : "suffix";
          j["angle"] = m.angle;
        } else if constexpr (std::is_same_v<T, SubchainAboutLineMove>) {
          j["a"] = m.a;
          j["b"] = m.b;
          j["angle"] = m.angle;
        } else if constexpr (std::is_same_v<T, CoupledLiftMove>) {
          j["joint"] = m.joint;
        } else {
          j["joints"] = m.joints;
          j["axis_point"] = vec_to_json(m.axis_point);
          j["axis_dir"] = vec_to_json(m.axis_dir);
          j["angle"] = m.angle;
          j["plane_point"] = vec_to_json(m.plane_point);
          j["plane_normal"] = vec_to_json(m.plane_normal);
          j["orientation"] = m.orientation == FourBarOrientation::kInPlane
                                 ? "in-plane"
                                 : "vertical-halfplane";
        }
      },
      move);
  return j;
}

Move move_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "single-joint") {
    SingleJointMove m;
    m.joint = j.at("joint").get<int>();
    m.axis_point = vec_from_json(j.at("axis_point"));
    m.axis_dir = vec_from_json(j.at("axis_dir"));
    const std::string side = j.at("moving_side").get<std::string>();
    if (side != "prefix" && side != "suffix")
      throw std::runtime_error("moving_side must be prefix or suffix");
    m.moving_side = side == "prefix" ? MovingSide::kPrefix : MovingSide::kSuffix;
    m.angle = j.at("angle").get<double>();
    return m;
  }
  if (kind == "subchain-about-line") {
    SubchainAboutLineMove m;
    m.a = j.at("a").get<int>();
    m.b = j.at("b").get<int>();
    m.angle = j.at("angle").get<double>();
    return m;
  }
  if (kind == "coupled-lift") {
    CoupledLiftMove m;
    m.joint = j.at("joint").get<int>();
    return m;
  }
  if (kind == "four-bar") {
    FourBarMove m;
    const auto& joints = j.at("joints");
    if (!joints.is_array() || joints.size() != 4)
      throw std::runtime_error("four-bar: joints must be 4 indices");
    for (int i = 0; i < 4; ++i) m.joints[i] = joints[i].get<int>();
    m.axis_point = vec_from_json(j.at("axis_point"));
    m.axis_dir = vec_from_json(j.at("axis_dir"));
    m.angle = j.at("angle").get<double>();
    m.plane_point = vec_from_json(j.at("plane_point"));
    m.plane_normal = vec_from_json(j.at("plane_normal"));
    const std::string ori = j.at("orientation").get<std::string>();
    if (ori == "in-plane")
      m.orientation = FourBarOrientation::kInPlane;
    else if (ori == "vertical-halfplane")
      m.orientation = FourBarOrientation::kVerticalHalfplane;
    else
      throw std::runtime_error("four-bar: unknown orientation " + ori);
    return m;
  }
  throw std::runtime_error("unknown move kind: " + kind);
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void save_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace

json chain_to_json(const ChainConfig& config) {
  json verts = json::array();
  for (const Vec3& v : config.vertices) verts.push_back(vec_to_json(v));
  return json{{"closed", config.closed}, {"vertices", std::move(verts)}};
}

ChainConfig chain_from_json(const json& j) {
  if (!j.is_object() || !j.contains("closed") || !j.contains("vertices"))
    throw std::runtime_error("chain: expected {\"closed\", \"vertices\"}");
  std::vector<Vec3> verts;
  for (const auto& v : j.at("vertices")) verts.push_back(vec_from_json(v));
  return make_chain(std::move(verts), j.at("closed").get<bool>());
}

json plan_to_json(const MotionPlan& plan) {
  json moves = json::array();
  for (const Move& m : plan.moves) moves.push_back(move_to_json(m));
  json j{{"initial", chain_to_json(plan.initial)}, {"moves", std::move(moves)}};
  if (!plan.exemptions.empty()) {
    json ex = json::array();
    for (const ExemptionBall& b : plan.exemptions)
      ex.push_back(json{{"center", vec_to_json(b.center)}, {"radius", b.radius}});
    j["exemptions"] = std::move(ex);
  }
  return j;
}

MotionPlan plan_from_json(const json& j) {
  MotionPlan plan;
  plan.initial = chain_from_json(j.at("initial"));
  for (const auto& m : j.at("moves")) plan.moves.push_back(move_from_json(m));
  if (j.contains("exemptions")) {
    for (const auto& e : j.at("exemptions"))
      plan.exemptions.push_back(
          {vec_from_json(e.at("center")), e.at("radius").get<double>()});
  }
  return plan;
}

void write_chain(const std::string& path, const ChainConfig& config) {
  save_file(path, chain_to_json(config));
}

ChainConfig read_chain(const std::string& path) {
  return chain_from_json(load_file(path));
}

void write_plan(const std::string& path, const MotionPlan& plan) {
  save_file(path, plan_to_json(plan));
}

MotionPlan read_plan(const std::string& path) {
  return plan_from_json(load_file(path));
}

void write_frames(const std::string& path, const MotionPlan& plan,
                  int samples_per_move) {
  json frames = json::array();
  ChainConfig cfg = plan.initial;
  auto push = [&](double t, const ChainConfig& c) {
    json verts = json::array();
    for (const Vec3& v : c.vertices) verts.push_back(vec_to_json(v));
    frames.push_back(json{{"t", t}, {"vertices", std::move(verts)}});
  };
  push(0.0, cfg);
  for (size_t mi = 0; mi < plan.moves.size(); ++mi) {
    for (int s = 1; s <= samples_per_move; ++s) {
      const double t = static_cast<double>(s) / samples_per_move;
      push(mi + t, pose_at(plan.moves[mi], cfg, t));
    }
    cfg = apply_move(plan.moves[mi], cfg);
  }
  save_file(path, json{{"frames", std::move(frames)}});
}

}  // namespace chains
