#include "qbern/numeric.hpp"

#include <array>
#include <charconv>
#include <cstring>

namespace qbern {

std::string double_str(double v) {
    if (v == 0.0) v = 0.0; // drop the sign of negative zero
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

} // namespace qbern
