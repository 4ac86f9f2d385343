#pragma once

#include "qwalk/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace qwalk {

using json = nlohmann::json;

// Atoms as [[dx, dy, "p/q"], ...], sorted by (dx, dy).
json law_to_json(const IncrementLaw& law);
IncrementLaw law_from_json(const json& j);

// {"R", "interior", "horizontal", "vertical", "corner"}. A missing "corner"
// array is filled with default_corner_laws.
json spec_to_json(const WalkSpec& spec);
WalkSpec spec_from_json(const json& j);

// Increment file: a bare atom array or {"atoms": [...]}.
IncrementLaw increment_from_json(const json& j);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace qwalk
