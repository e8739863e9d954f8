#pragma once

#include <cstdint>
#include <optional>

namespace azuma {

/// Envelope pair (b, c) for conditional tails:
///   max{Pr(Z > a | past), Pr(Z < -a | past)} <= b * exp(-c * a^2)  for all a > 0.
///
/// b >= 1 and c > 0 are enforced at construction; a SubgaussianParams value is
/// always valid.
class SubgaussianParams {
 public:
  SubgaussianParams(double b, double c);

  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }

  friend bool operator==(const SubgaussianParams&, const SubgaussianParams&) = default;

 private:
  double b_;
  double c_;
};

/// A (T, delta, epsilon) triple in which at most one entry is unknown.
struct DeviationQuery {
  std::optional<std::uint64_t> horizon;
  std::optional<double> delta;
  std::optional<double> epsilon;

  // Throws DomainError if a present entry is out of range or more than one is missing.
  void validate() const;
};

/// Fills in the missing entry of `query` using the subgaussian bound.
/// With all three present the query is returned unchanged.
DeviationQuery solve(const SubgaussianParams& params, DeviationQuery query);

/// A multiplier s of the Chernoff argument together with its log-scale exponent.
struct ChernoffPoint {
  double s = 0.0;
  double exponent = 0.0;
};

// Classic Azuma: |Z_t| <= bound almost surely.
double classic_azuma_epsilon(double bound, std::uint64_t horizon, double delta);

// sqrt(28 b ln(1/delta) / (c T)).
double subgaussian_epsilon(const SubgaussianParams& params, std::uint64_t horizon, double delta);

// exp(-c T eps^2 / (28 b)); exactly 1 at eps == 0.
double subgaussian_delta(const SubgaussianParams& params, std::uint64_t horizon, double epsilon);

/// Smallest T with subgaussian_epsilon(params, T, delta) <= epsilon.
/// Throws OverflowError when that T is not representable.
std::uint64_t required_horizon(const SubgaussianParams& params, double epsilon, double delta);

/// Log of the MGF envelope, 7 b s^2 / c. With `piecewise`, the sharper
/// 6 b s^2 / c is used for s <= sqrt(c)/2 (boundary included).
double mgf_envelope(double s, const SubgaussianParams& params, bool piecewise = false);

// 2b/c, an upper bound on E[X^2] under the tail envelope.
double second_moment_envelope(const SubgaussianParams& params);

// c eps / (14 b), the minimiser of chernoff_exponent over s >= 0.
double optimal_s(double epsilon, const SubgaussianParams& params);

// -s T eps + 7 T b s^2 / c.
double chernoff_exponent(double s, double epsilon, std::uint64_t horizon,
                         const SubgaussianParams& params);

ChernoffPoint chernoff_point(double s, double epsilon, std::uint64_t horizon,
                             const SubgaussianParams& params);

/// Envelope parameters for a variable bounded by |X| <= bound: (e, 1/bound^2).
/// Among all valid (b, c) for a hard bound this choice minimises the
/// resulting deviation epsilon.
SubgaussianParams params_from_bound(double bound);

}  // namespace azuma
