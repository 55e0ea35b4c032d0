#pragma once

#include <charconv>
#include <string>

namespace thermoq::detail {

// Shortest text that reads back as the same double.
inline std::string describe(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

}  // namespace thermoq::detail
