#pragma once

#include <cstddef>
#include <vector>

namespace azuma {

// n points, lo and hi included.
std::vector<double> linear_grid(double lo, double hi, std::size_t n);
std::vector<double> log_grid(double lo, double hi, std::size_t n);

// k * hi / n for k = 1..n: uniform on (0, hi], the origin excluded.
std::vector<double> open_linear_grid(double hi, std::size_t n);

}  // namespace azuma
