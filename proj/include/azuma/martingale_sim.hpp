#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "azuma/core_bounds.hpp"
#include "azuma/distributions.hpp"
#include "azuma/verification_report.hpp"

namespace azuma {

// I.i.d. draws from a fixed distribution.
struct IidStep {
  DistributionSpec dist;
};

// Centered Gaussian whose scale follows a two-regime Markov switch between
// sigma_min and sigma_max. The switch coin for step t+1 is drawn after Z_t,
// so the scale of Z_{t+1} is a deterministic function of the history.
struct ScaledGaussian {
  double sigma_min;
  double sigma_max;
  double switch_probability = 0.1;
};

enum class MagnitudeRule {
  kConstant,          // |Z_t| = max_magnitude
  kHalveWhenBehind,   // |Z_t| = max_magnitude / 2 while the running sum is negative
};

// Z_t = +/- m_t with a fair sign, m_t <= max_magnitude chosen from the history.
struct BoundedSignFlip {
  double max_magnitude;
  MagnitudeRule rule = MagnitudeRule::kConstant;
};

struct ConstantZero {};

using GeneratorFamily = std::variant<IidStep, ScaledGaussian, BoundedSignFlip, ConstantZero>;

/// Markov summary of the history X_1..X_t. Every shipped rule depends on
/// the history only through these fields.
struct PathState {
  std::uint64_t step = 0;
  double running_sum = 0.0;
  int regime = 0;  // ScaledGaussian: 0 -> sigma_min, 1 -> sigma_max
};

/// Per-path random source. Owns the engine and the standard distribution
/// adaptors so their internal caches stay with the path.
class PathRng {
 public:
  explicit PathRng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double unit() { return unit_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

/// A martingale difference sequence generator with conditional subgaussian
/// parameters valid for every history.
///
/// Default declared parameters:
///   IidStep          -> the distribution's declared params (Laplace rejected)
///   ScaledGaussian   -> (1, 1/(2 sigma_max^2))
///   BoundedSignFlip  -> params_from_bound(max_magnitude)
///   ConstantZero     -> (1, 1)
class GeneratorSpec {
 public:
  explicit GeneratorSpec(GeneratorFamily family);
  GeneratorSpec(GeneratorFamily family, SubgaussianParams declared);

  static GeneratorSpec iid(DistributionSpec dist) { return GeneratorSpec(IidStep{std::move(dist)}); }
  static GeneratorSpec scaled_gaussian(double sigma_min, double sigma_max, double switch_probability = 0.1) {
    return GeneratorSpec(ScaledGaussian{sigma_min, sigma_max, switch_probability});
  }
  static GeneratorSpec sign_flip(double max_magnitude, MagnitudeRule rule = MagnitudeRule::kConstant) {
    return GeneratorSpec(BoundedSignFlip{max_magnitude, rule});
  }
  static GeneratorSpec constant_zero() { return GeneratorSpec(ConstantZero{}); }

  const GeneratorFamily& family() const noexcept { return family_; }
  const SubgaussianParams& declared_params() const noexcept { return declared_; }

  // "iid_step", "scaled_gaussian", "bounded_sign_flip" or "constant_zero".
  std::string family_name() const;
  std::optional<double> hard_bound() const;
  bool is_degenerate() const noexcept { return std::holds_alternative<ConstantZero>(family_); }

  // Draws Z_{t+1} given `state` and advances the state past it.
  double draw(PathState& state, PathRng& rng) const;

 private:
  GeneratorFamily family_;
  SubgaussianParams declared_;
};

/// Seed of path `index` under master `seed`: the splitmix64 finaliser applied
/// to seed + (index + 1) * 0x9e3779b97f4a7c15. Injective in index for a
/// fixed seed.
std::uint64_t path_seed(std::uint64_t seed, std::uint64_t index);

struct SimulationOptions {
  unsigned jobs = 1;
  std::uint64_t max_draws = 1'000'000'000;
};

struct TailCounts {
  double epsilon = 0.0;
  std::uint64_t upper = 0;  // path mean > epsilon
  std::uint64_t lower = 0;  // path mean < -epsilon
};

/// Time-averaged sums (1/T) sum Z_t of independent paths.
struct SimulationSummary {
  std::uint64_t n_paths = 0;
  std::uint64_t horizon = 0;
  std::uint64_t seed = 0;
  std::vector<double> path_means;    // indexed by path
  std::vector<double> sorted_means;  // ascending
  std::optional<TailCounts> violations;
  std::vector<std::pair<double, double>> quantiles;  // (level, value)

  // Order statistic at ceil(level * n), level in (0, 1).
  double quantile(double level) const;
  std::uint64_t count_above(double epsilon) const;
  std::uint64_t count_below(double epsilon) const;
  double mean() const;
};

/// Simulates `n_paths` paths of length `horizon`. Path i draws only from
/// path_seed(seed, i), so results do not depend on options.jobs. Throws
/// ResourceError when n_paths * horizon exceeds options.max_draws.
SimulationSummary generate_paths(const GeneratorSpec& gen, std::uint64_t horizon,
                                 std::uint64_t n_paths, std::uint64_t seed,
                                 const SimulationOptions& options = {});

// Fills violation counts at `epsilon` and the requested quantiles.
void annotate(SimulationSummary& summary, double epsilon, std::span<const double> levels);

// 3 sqrt(delta (1 - delta) / n).
double binomial_slack(double delta, std::uint64_t n_paths);

/// Upper and lower violation rates at the subgaussian epsilon for the
/// generator's declared params, each against delta + binomial_slack. The
/// lower tail follows from the symmetric envelope; the bound itself only
/// covers the upper deviation.
VerificationReport validate_bound(const GeneratorSpec& gen, const SimulationSummary& summary,
                                  double delta);
VerificationReport validate_bound(const GeneratorSpec& gen, std::uint64_t horizon, double delta,
                                  std::uint64_t n_paths, std::uint64_t seed,
                                  const SimulationOptions& options = {});

/// subgaussian epsilon / empirical (1 - delta)-quantile of the path means.
/// Throws DegenerateInputError for ConstantZero or a non-positive quantile.
double tightness(const GeneratorSpec& gen, const SimulationSummary& summary, double delta);
double tightness(const GeneratorSpec& gen, std::uint64_t horizon, double delta,
                 std::uint64_t n_paths, std::uint64_t seed, const SimulationOptions& options = {});

/// Monte-Carlo estimate of E[Z_{t+1} | history]; passes when within
/// 4 sd / sqrt(n_samples) of zero.
VerificationReport conditional_mean_check(const GeneratorSpec& gen, const PathState& history,
                                          std::uint64_t n_samples, std::uint64_t seed);

// Single column, header `path_mean`, one row per path in path order.
void write_path_means_csv(const SimulationSummary& summary, std::ostream& out);

}  // namespace azuma
