#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace confla {

/// Parses a complete decimal number ('.' separator, surrounding blanks
/// ignored). Returns nullopt on trailing garbage or an empty field.
std::optional<double> parse_double(std::string_view text);

/// Shortest text that round-trips to the same double.
std::string format_double(double value);

}  // namespace confla
