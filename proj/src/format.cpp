#include "mwmlab/format.hpp"

#include <array>
#include <charconv>

namespace mwmlab {

namespace {

template <typename T>
std::string to_text(T value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  (void)ec;
  return std::string(buf.data(), end);
}

}  // namespace

std::string format_number(double value) { return to_text(value); }
std::string format_number(std::int64_t value) { return to_text(value); }
std::string format_number(std::uint64_t value) { return to_text(value); }

}  // namespace mwmlab
