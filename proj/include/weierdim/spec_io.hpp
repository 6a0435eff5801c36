#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "weierdim/sequence.hpp"

namespace weierdim {

// JSON document layout (see schema/sequence_spec.schema.json):
//   {"kind": "geometric_exponent" | "power_tower" | "super_tower" | "explicit_table",
//    "params": {...},
//    "phase": {"rule": "zero" | "constant" | "list", "theta": x, "values": [...]},
//    "base": "sawtooth"}            // optional hint for the CLI
nlohmann::json spec_to_json(const SequenceSpec& spec, const std::optional<std::string>& base = {});
SequenceSpec spec_from_json(const nlohmann::json& doc);

// Returns the "base" hint of a spec document, if any.
std::optional<std::string> base_hint(const nlohmann::json& doc);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace weierdim
