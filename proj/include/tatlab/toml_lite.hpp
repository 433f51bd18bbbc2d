#pragma once

#include <string>

#include <json.hpp>

#include "tatlab/types.hpp"

namespace tatlab {

/// Strict subset of TOML sufficient for scenario files: comments, [table]
/// and [dotted.table] headers, bare or quoted keys, strings, booleans,
/// integers, floats (with inf/nan and underscores), and arrays (nested,
/// heterogeneous, multi-line). Unsupported constructs (inline tables,
/// arrays-of-tables, dotted keys, dates, multi-line strings) are rejected
/// with a line-numbered error. The result is a json object tree; integers
/// and floats keep their distinct types.
nlohmann::ordered_json parse_toml(const std::string& text);

/// Reads and parses a file; IoError when unreadable.
nlohmann::ordered_json parse_toml_file(const std::string& path);

}  // namespace tatlab
