#pragma once

#include <optional>
#include <string>
#include <variant>

#include "azuma/core_bounds.hpp"

namespace azuma {

struct CenteredGaussian {
  double sigma;
};

// Uniform on [-half_width, half_width].
struct UniformSymmetric {
  double half_width;
};

// +/- magnitude with probability 1/2 each.
struct Rademacher {
  double magnitude;
};

// Density (rate/2) exp(-rate |x|). Heavier than any Gaussian tail; used as
// the negative control.
struct Laplace {
  double rate;
};

using DistributionFamily = std::variant<CenteredGaussian, UniformSymmetric, Rademacher, Laplace>;

/// A zero-mean, symmetric distribution with closed-form tails, log-MGF and
/// second moment, optionally carrying envelope parameters it is known to meet.
///
/// Default declared parameters:
///   Gaussian(sigma)   -> (1, 1/(2 sigma^2))
///   Uniform(B)        -> params_from_bound(B)
///   Rademacher(m)     -> params_from_bound(m)
///   Laplace           -> none; no (b, c) dominates an exponential tail.
class DistributionSpec {
 public:
  explicit DistributionSpec(DistributionFamily family);
  // Explicit declared parameters replace the defaults. Throws DomainError for
  // Laplace with a declared pair.
  DistributionSpec(DistributionFamily family, std::optional<SubgaussianParams> declared);

  static DistributionSpec gaussian(double sigma) { return DistributionSpec(CenteredGaussian{sigma}); }
  static DistributionSpec uniform(double half_width) {
    return DistributionSpec(UniformSymmetric{half_width});
  }
  static DistributionSpec rademacher(double magnitude) {
    return DistributionSpec(Rademacher{magnitude});
  }
  static DistributionSpec laplace(double rate) { return DistributionSpec(Laplace{rate}); }

  const DistributionFamily& family() const noexcept { return family_; }
  const std::optional<SubgaussianParams>& declared_params() const noexcept { return declared_; }

  // "gaussian", "uniform", "rademacher" or "laplace".
  std::string family_name() const;

  // Pr(X >= t).
  double upper_tail(double t) const;
  // Pr(X <= -t); equal to upper_tail(t) for every shipped family.
  double lower_tail(double t) const;
  // ln Pr(X >= t) for t > 0, accurate far into the Gaussian tail. -inf when the tail is 0.
  double log_upper_tail(double t) const;
  // ln Pr(X <= -t) for t > 0.
  double log_lower_tail(double t) const;

  double second_moment() const;
  // sigma, half_width, magnitude or 1/rate.
  double scale() const;
  bool is_continuous() const;
  // |s| must be below this for the MGF to exist (Laplace only).
  std::optional<double> mgf_radius() const;
  // Almost-sure bound on |X|, when one exists.
  std::optional<double> hard_bound() const;

 private:
  DistributionFamily family_;
  std::optional<SubgaussianParams> declared_;
};

}  // namespace azuma
