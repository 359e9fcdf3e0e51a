#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "qminv/linear_system.hpp"

namespace qminv {

/// On-disk instance: the system plus generation provenance.
///
///   {"n": 2, "M": 8, "mode": "modular", "A": [[..],[..]], "b": [..],
///    "seed": 42, "solution": [..]}
///
/// "solution" is optional.
struct InstanceFile {
  LinearSystem system;
  std::uint64_t seed = 0;
  std::optional<GridPoint> solution;
};

nlohmann::json to_json(const InstanceFile& instance);
InstanceFile instance_from_json(const nlohmann::json& doc);

InstanceFile read_instance(const std::string& path);
void write_instance(const InstanceFile& instance, const std::string& path);

}  // namespace qminv
