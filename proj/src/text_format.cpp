#include "grnn/text_format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace grnn {

std::string format_double(double value)
{
  if (std::isnan(value)) {
    return "nan";
  }
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), result.ptr);
}

} // namespace grnn
