#pragma once

#include <string>
#include <string_view>

namespace lla {

/// Shortest-safe decimal for a double: 17 significant digits, so parsing it
/// back with parse_double yields the identical bit pattern.
std::string format_double(double v);

/// Strict parse of a whole token; throws IoError on trailing garbage.
double parse_double(std::string_view token);

}  // namespace lla
