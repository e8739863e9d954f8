#include "azuma/grid.hpp"

#include <cmath>

#include "azuma/errors.hpp"

namespace azuma {

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (n < 2 || !(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("linear grid needs n >= 2 and finite lo < hi");
  }
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) out[k] = lo + step * static_cast<double>(k);
  out.back() = hi;
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0)) throw DomainError("log grid needs lo > 0");
  std::vector<double> out = linear_grid(std::log(lo), std::log(hi), n);
  for (double& x : out) x = std::exp(x);
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> open_linear_grid(double hi, std::size_t n) {
  if (n < 1 || !(hi > 0.0) || !std::isfinite(hi)) {
    throw DomainError("grid needs n >= 1 and a finite upper end > 0");
  }
  std::vector<double> out(n);
  for (std::size_t k = 1; k <= n; ++k) out[k - 1] = hi * static_cast<double>(k) / static_cast<double>(n);
  return out;
}

}  // namespace azuma
