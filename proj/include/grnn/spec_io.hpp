#pragma once

#include "grnn/network.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace grnn {

/// Parses a network spec document (JSON). Throws SpecSyntaxError with a
/// 1-based line/column for malformed text and SpecSchemaError naming the
/// offending field for structurally wrong documents. The result is not
/// validated; call validate() on it.
Grnn load_spec(std::string_view text);

/// Reads and parses a spec file. Throws std::runtime_error if the file
/// cannot be read.
Grnn load_spec_file(const std::filesystem::path& path);

/// Serializes with a fixed key order and round-trip-exact numbers.
std::string save_spec(const Grnn& net);

const char* to_string(RegulationMode mode) noexcept;
const char* to_string(RateUnit unit) noexcept;

} // namespace grnn
