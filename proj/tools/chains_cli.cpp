// chains: plan, validate, and export certified reconfigurations of
// polygonal chains in 3D.

#include "chains/arch.hpp"
#include "chains/flips.hpp"
#include "chains/io.hpp"
#include "chains/motion.hpp"
#include "chains/needles.hpp"
#include "chains/straighten.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

namespace {

constexpr int kOk = 0;
constexpr int kPlanFailure = 1;
constexpr int kBadInput = 2;

chains::ValidatePolicy policy_with(double tol, int samples) {
  chains::ValidatePolicy p;
  p.tolerance = tol;
  p.initial_samples = samples;
  return p;
}

// Any failure to read or parse an input file is bad input (exit 2), as
// opposed to planner/validator failures (exit 1).
struct BadInput {
  std::string message;
};

chains::ChainConfig load_chain(const std::string& path) {
  try {
    return chains::read_chain(path);
  } catch (const std::exception& e) {
    throw BadInput{e.what()};
  }
}

chains::MotionPlan load_plan(const std::string& path) {
  try {
    return chains::read_plan(path);
  } catch (const std::exception& e) {
    throw BadInput{e.what()};
  }
}

int report_validation(const chains::ValidationReport& rep) {
  if (rep.certified) {
    std::printf("certified: %zu moves\n", rep.per_move.size());
    return kOk;
  }
  std::fprintf(stderr, "uncertified: %s\n", rep.first_failure.c_str());
  return kPlanFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified reconfiguration of polygonal chains in 3D"};
  app.require_subcommand(1);

  std::string in_path, out_path, plan_path, method = "flips";
  std::string shape = "needles-open";
  std::uint64_t seed = 0;
  int samples = 64;
  double tol = chains::kRelTol;
  long max_flips = 100000;
  long budget = 100000;
  double offset = -1.0;  // gen: doubling offset, <0 = default

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "random seed (default 0)");
    sub->add_option("--tol", tol, "validation tolerance");
    sub->add_option("--samples", samples, "initial samples per move");
  };

  CLI::App* straighten = app.add_subcommand(
      "straighten", "plan straightening of an open chain");
  straighten->add_option("--in", in_path, "chain file")->required();
  straighten->add_option("--out", out_path, "plan file")->required();
  straighten->add_option("--budget", budget, "projection search budget");
  add_common(straighten);

  CLI::App* convexify =
      app.add_subcommand("convexify", "plan convexification of a polygon");
  convexify->add_option("--in", in_path, "chain file")->required();
  convexify->add_option("--out", out_path, "plan file")->required();
  convexify->add_option("--method", method, "flips|arch")
      ->check(CLI::IsMember({"flips", "arch"}));
  convexify->add_option("--max-flips", max_flips, "flip cap");
  add_common(convexify);

  CLI::App* gen = app.add_subcommand("gen", "generate example chains");
  gen->add_option("--shape", shape, "needles-open|needles-closed")
      ->check(CLI::IsMember({"needles-open", "needles-closed"}));
  gen->add_option("--out", out_path, "chain file")->required();
  gen->add_option("--offset", offset, "doubling offset (needles-closed)");
  add_common(gen);

  CLI::App* validate = app.add_subcommand("validate", "certify a plan file");
  validate->add_option("--plan", plan_path, "plan file")->required();
  add_common(validate);

  CLI::App* project =
      app.add_subcommand("project", "search for a simple projection");
  project->add_option("--in", in_path, "chain file")->required();
  project->add_option("--budget", budget, "directions to try");
  add_common(project);

  CLI::App* knot_det =
      app.add_subcommand("knot-det", "knot determinant of a closed chain");
  knot_det->add_option("--in", in_path, "chain file")->required();
  add_common(knot_det);

  CLI::App* export_frames =
      app.add_subcommand("export-frames", "sample a plan into frames");
  export_frames->add_option("--plan", plan_path, "plan file")->required();
  export_frames->add_option("--out", out_path, "frames file")->required();
  export_frames->add_option("--samples", samples, "samples per move");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kBadInput;
  }

  try {
    if (straighten->parsed()) {
      const chains::ChainConfig chain = load_chain(in_path);
      chains::MotionPlan plan;
      if (chains::project(chain, chains::Vec3::UnitZ()).ok) {
        plan = chains::straighten(chain);
      } else {
        const auto search = chains::find_simple_projection(
            chain, static_cast<int>(budget), seed);
        if (!search) {
          std::fprintf(stderr, "no simple projection found\n");
          return kPlanFailure;
        }
        plan = chains::straighten_along(chain, search->direction);
      }
      const auto rep = chains::validate(plan, policy_with(tol, samples));
      if (!rep.certified) return report_validation(rep);
      chains::write_plan(out_path, plan);
      return report_validation(rep);
    }

    if (convexify->parsed()) {
      const chains::ChainConfig chain = load_chain(in_path);
      chains::MotionPlan plan;
      if (method == "flips") {
        const auto result = chains::convexify_flips(chain, max_flips);
        if (!result.convex) {
          std::fprintf(stderr, "flip cap reached before convexity\n");
          return kPlanFailure;
        }
        plan = result.plan;
      } else {
        const auto result = chains::convexify_arch(chain);
        plan = result.plan;
      }
      const auto rep = chains::validate(plan, policy_with(tol, samples));
      if (!rep.certified) return report_validation(rep);
      chains::write_plan(out_path, plan);
      return report_validation(rep);
    }

    if (gen->parsed()) {
      chains::NeedleParams params;
      chains::ChainConfig chain;
      if (shape == "needles-open") {
        chain = chains::make_knitting_needles(params);
      } else if (offset > 0) {
        chain = chains::make_locked_closed(params, offset);
      } else {
        chain = chains::make_locked_closed(params);
      }
      chains::write_chain(out_path, chain);
      std::printf("wrote %d vertices\n", chain.vertex_count());
      return kOk;
    }

    if (validate->parsed()) {
      const chains::MotionPlan plan = load_plan(plan_path);
      return report_validation(
          chains::validate(plan, policy_with(tol, samples)));
    }

    if (project->parsed()) {
      const chains::ChainConfig chain = load_chain(in_path);
      const auto search = chains::find_simple_projection(
          chain, static_cast<int>(budget), seed);
      if (!search) {
        std::fprintf(stderr, "no simple projection found\n");
        return kPlanFailure;
      }
      std::printf("direction %.17g %.17g %.17g clearance %.17g\n",
                  search->direction.x(), search->direction.y(),
                  search->direction.z(),
                  search->certificate.min_projected_clearance);
      return kOk;
    }

    if (knot_det->parsed()) {
      const chains::ChainConfig chain = load_chain(in_path);
      std::printf("%ld\n", chains::knot_determinant(chain));
      return kOk;
    }

    if (export_frames->parsed()) {
      const chains::MotionPlan plan = load_plan(plan_path);
      chains::write_frames(out_path, plan, samples);
      return kOk;
    }
  } catch (const BadInput& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kBadInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kPlanFailure;
  }
  return kBadInput;
}
