#pragma once

// JSON wire formats.
//
//   PatternPartition: {"first": "<n>:0x<hex>", "classes": {"<pattern>": [1-based indices]}}
//   Instance:         {"n": <int>, "kappa": <real>, "active": [<center code>, ...]}
//   SolveResult:      {"empty": bool, "count": int, "witness": "<n>:0x<hex>" | null, "backend": "<name>"}

#include <filesystem>
#include <string>

#include <json.hpp>

#include "perclab/encoding.hpp"
#include "perclab/sat_engine.hpp"

namespace perclab {

nlohmann::json to_json(const PatternPartition& pp);
PatternPartition partition_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Disorder& d);
Disorder disorder_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SolveResult& r);

Disorder read_instance(const std::filesystem::path& path);
void write_instance(const std::filesystem::path& path, const Disorder& d);

}  // namespace perclab
