#pragma once

#include <cstdint>
#include <string>

namespace mwmlab {

// Locale-independent shortest round-trip formatting.
std::string format_number(double value);
std::string format_number(std::int64_t value);
std::string format_number(std::uint64_t value);

}  // namespace mwmlab
