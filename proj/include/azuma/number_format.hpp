#pragma once

#include <string>

namespace azuma {

// Shortest decimal string that parses back to exactly `value`.
std::string shortest(double value);

// Fixed notation with 6 decimals, for human-readable tables.
std::string fixed6(double value);

}  // namespace azuma
