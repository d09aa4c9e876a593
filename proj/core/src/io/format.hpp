#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <string>

namespace floquet::detail {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string hex_bits(double x) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(x)));
  return buf;
}

}  // namespace floquet::detail
