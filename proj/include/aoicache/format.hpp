#pragma once

#include <string>

namespace aoicache {

/// Shortest "%.12g" rendering; the serialization used by every CSV and report.
std::string format_number(double value);

}  // namespace aoicache
