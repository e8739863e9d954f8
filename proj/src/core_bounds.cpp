#include "azuma/core_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "azuma/errors.hpp"

namespace azuma {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

void check_delta(double delta) {
  require(std::isfinite(delta) && delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
}

void check_horizon(std::uint64_t horizon) { require(horizon >= 1, "horizon T must be >= 1"); }

void check_epsilon(double epsilon) {
  require(std::isfinite(epsilon) && epsilon >= 0.0, "epsilon must be finite and >= 0");
}

// ln(1/delta), natural log throughout.
double log_inverse(double delta) { return -std::log(delta); }

}  // namespace

SubgaussianParams::SubgaussianParams(double b, double c) : b_(b), c_(c) {
  require(std::isfinite(b) && b >= 1.0, "envelope scale b must be finite and >= 1");
  require(std::isfinite(c) && c > 0.0, "envelope rate c must be finite and > 0");
}

void DeviationQuery::validate() const {
  int missing = 0;
  if (horizon) {
    check_horizon(*horizon);
  } else {
    ++missing;
  }
  if (delta) {
    check_delta(*delta);
  } else {
    ++missing;
  }
  if (epsilon) {
    check_epsilon(*epsilon);
  } else {
    ++missing;
  }
  require(missing <= 1, "at most one of T, delta, epsilon may be unknown");
}

DeviationQuery solve(const SubgaussianParams& params, DeviationQuery query) {
  query.validate();
  if (!query.epsilon) {
    query.epsilon = subgaussian_epsilon(params, *query.horizon, *query.delta);
  } else if (!query.delta) {
    query.delta = subgaussian_delta(params, *query.horizon, *query.epsilon);
  } else if (!query.horizon) {
    query.horizon = required_horizon(params, *query.epsilon, *query.delta);
  }
  return query;
}

double classic_azuma_epsilon(double bound, std::uint64_t horizon, double delta) {
  require(std::isfinite(bound) && bound > 0.0, "hard bound B must be finite and > 0");
  check_horizon(horizon);
  check_delta(delta);
  return bound * std::sqrt(2.0 * log_inverse(delta) / static_cast<double>(horizon));
}

double subgaussian_epsilon(const SubgaussianParams& params, std::uint64_t horizon, double delta) {
  check_horizon(horizon);
  check_delta(delta);
  return std::sqrt(28.0 * params.b() * log_inverse(delta) /
                   (params.c() * static_cast<double>(horizon)));
}

double subgaussian_delta(const SubgaussianParams& params, std::uint64_t horizon, double epsilon) {
  check_horizon(horizon);
  check_epsilon(epsilon);
  if (epsilon == 0.0) return 1.0;
  return std::exp(-params.c() * static_cast<double>(horizon) * epsilon * epsilon /
                  (28.0 * params.b()));
}

std::uint64_t required_horizon(const SubgaussianParams& params, double epsilon, double delta) {
  require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be finite and > 0");
  check_delta(delta);

  const double exact = 28.0 * params.b() * log_inverse(delta) / (params.c() * epsilon * epsilon);
  // 2^64 as a double; anything at or above it cannot be returned.
  constexpr double kLimit = 18446744073709551616.0;
  if (!std::isfinite(exact) || std::ceil(exact) >= kLimit) {
    throw OverflowError("required horizon exceeds the representable range");
  }

  auto horizon = static_cast<std::uint64_t>(std::max(1.0, std::ceil(exact)));
  // The closed form can be off by one ulp-induced step; settle on the
  // contract stated through subgaussian_epsilon itself.
  while (horizon > 1 && subgaussian_epsilon(params, horizon - 1, delta) <= epsilon) --horizon;
  while (subgaussian_epsilon(params, horizon, delta) > epsilon) {
    if (horizon == std::numeric_limits<std::uint64_t>::max()) {
      throw OverflowError("required horizon exceeds the representable range");
    }
    ++horizon;
  }
  return horizon;
}

double mgf_envelope(double s, const SubgaussianParams& params, bool piecewise) {
  require(std::isfinite(s) && s >= 0.0, "multiplier s must be finite and >= 0");
  const double ratio = params.b() * s * s / params.c();
  if (piecewise && s <= std::sqrt(params.c()) / 2.0) return 6.0 * ratio;
  return 7.0 * ratio;
}

double second_moment_envelope(const SubgaussianParams& params) {
  return 2.0 * params.b() / params.c();
}

double optimal_s(double epsilon, const SubgaussianParams& params) {
  require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be finite and > 0");
  return params.c() * epsilon / (14.0 * params.b());
}

double chernoff_exponent(double s, double epsilon, std::uint64_t horizon,
                         const SubgaussianParams& params) {
  require(std::isfinite(s) && s >= 0.0, "multiplier s must be finite and >= 0");
  require(std::isfinite(epsilon), "epsilon must be finite");
  check_horizon(horizon);
  const double t = static_cast<double>(horizon);
  return -s * t * epsilon + 7.0 * t * params.b() * s * s / params.c();
}

ChernoffPoint chernoff_point(double s, double epsilon, std::uint64_t horizon,
                             const SubgaussianParams& params) {
  return {s, chernoff_exponent(s, epsilon, horizon, params)};
}

SubgaussianParams params_from_bound(double bound) {
  require(std::isfinite(bound) && bound > 0.0, "hard bound B must be finite and > 0");
  return {std::numbers::e, 1.0 / (bound * bound)};
}

}  // namespace azuma
