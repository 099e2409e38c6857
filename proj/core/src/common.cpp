#include "acdiag/common.hpp"

#include <charconv>
#include <cstdio>

namespace acdiag {

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
    return std::string(buffer, result.ptr);
}

}  // namespace acdiag
