#pragma once

// JSON file formats for chains, motion plans, and sampled frames.
// Numbers are serialized with round-trip precision; read(write(x)) == x
// bit-exactly.

#include "chains/motion.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>

namespace chains {

nlohmann::json chain_to_json(const ChainConfig& config);
ChainConfig chain_from_json(const nlohmann::json& j);

nlohmann::json plan_to_json(const MotionPlan& plan);
MotionPlan plan_from_json(const nlohmann::json& j);

void write_chain(const std::string& path, const ChainConfig& config);
ChainConfig read_chain(const std::string& path);

void write_plan(const std::string& path, const MotionPlan& plan);
MotionPlan read_plan(const std::string& path);

/// Sampled snapshots of a plan: {"frames": [{"t": ..., "vertices": ...}]}.
/// t = move index + local move parameter.
void write_frames(const std::string& path, const MotionPlan& plan,
                  int samples_per_move);

}  // namespace chains
