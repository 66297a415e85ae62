#include "aoicache/format.hpp"

#include <cstdio>

namespace aoicache {

std::string format_number(double value) {
  char buffer[32];
  const int written = std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return std::string(buffer, static_cast<std::size_t>(written));
}

}  // namespace aoicache
