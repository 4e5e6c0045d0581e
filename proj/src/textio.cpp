#include "lla/textio.hpp"

#include <charconv>
#include <cstdio>

#include "lla/errors.hpp"

namespace lla {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(std::string_view token) {
    double value = 0.0;
    const char *first = token.data();
    const char *last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw IoError("bad number '" + std::string(token) + "'");
    }
    return value;
}

}  // namespace lla
