#include "azuma/number_format.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace azuma {

std::string shortest(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

std::string fixed6(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, 6);
  return std::string(buf.data(), end);
}

}  // namespace azuma
