#include "azuma/martingale_sim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "azuma/errors.hpp"

namespace azuma {
namespace {

GeneratorSpec gaussian_generator() { return GeneratorSpec::iid(DistributionSpec::gaussian(1.0)); }

TEST(GeneratorSpec, DeclaredParams) {
  EXPECT_EQ(gaussian_generator().declared_params(), SubgaussianParams(1.0, 0.5));
  EXPECT_EQ(GeneratorSpec::scaled_gaussian(0.5, 2.0).declared_params(), SubgaussianParams(1.0, 0.125));
  EXPECT_EQ(GeneratorSpec::sign_flip(2.0).declared_params(), SubgaussianParams(std::numbers::e, 0.25));
  EXPECT_NO_THROW(GeneratorSpec(ConstantZero{}, SubgaussianParams(3.0, 9.0)));
  EXPECT_THROW(GeneratorSpec::iid(DistributionSpec::laplace(1.0)), DomainError);
  EXPECT_THROW(GeneratorSpec::scaled_gaussian(2.0, 1.0), DomainError);
  EXPECT_THROW(GeneratorSpec::scaled_gaussian(1.0, 2.0, 1.5), DomainError);
  EXPECT_THROW(GeneratorSpec::sign_flip(0.0), DomainError);
}

TEST(GeneratorSpec, HardBounds) {
  EXPECT_EQ(GeneratorSpec::sign_flip(1.5).hard_bound(), 1.5);
  EXPECT_EQ(GeneratorSpec::iid(DistributionSpec::uniform(2.0)).hard_bound(), 2.0);
  EXPECT_FALSE(gaussian_generator().hard_bound());
  EXPECT_FALSE(GeneratorSpec::scaled_gaussian(0.5, 1.0).hard_bound());
}

TEST(GeneratorSpec, SignFlipMagnitudeFollowsHistory) {
  const auto gen = GeneratorSpec::sign_flip(1.0, MagnitudeRule::kHalveWhenBehind);
  PathRng rng(9);
  for (int k = 0; k < 100; ++k) {
    PathState behind{5, -0.25, 0};
    EXPECT_EQ(std::abs(gen.draw(behind, rng)), 0.5);
    PathState ahead{5, 0.25, 0};
    EXPECT_EQ(std::abs(gen.draw(ahead, rng)), 1.0);
    EXPECT_EQ(ahead.step, 6u);
  }
}

TEST(PathSeed, DistinctAcrossPaths) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 100000; ++i) seen.insert(path_seed(42, i));
  EXPECT_EQ(seen.size(), 100000u);
  EXPECT_NE(path_seed(1, 0), path_seed(2, 0));
}

TEST(GeneratePaths, DeterministicAcrossRunsAndJobs) {
  const auto gen = GeneratorSpec::scaled_gaussian(0.5, 1.0);
  const auto a = generate_paths(gen, 30, 5000, 7);
  const auto b = generate_paths(gen, 30, 5000, 7);
  const auto c = generate_paths(gen, 30, 5000, 7, {.jobs = 4});
  const auto d = generate_paths(gen, 30, 5000, 7, {.jobs = 13});
  EXPECT_EQ(a.path_means, b.path_means);
  EXPECT_EQ(a.path_means, c.path_means);
  EXPECT_EQ(a.path_means, d.path_means);
  EXPECT_NE(a.path_means, generate_paths(gen, 30, 5000, 8).path_means);
}

TEST(GeneratePaths, ConstantZeroIsExactlyZero) {
  const auto summary = generate_paths(GeneratorSpec::constant_zero(), 17, 1000, 3);
  for (double m : summary.path_means) ASSERT_EQ(m, 0.0);
}

TEST(GeneratePaths, RademacherMeanIsCentered) {
  const auto summary = generate_paths(GeneratorSpec::iid(DistributionSpec::rademacher(1.0)), 1, 1000000, 11,
                                      {.jobs = 4});
  EXPECT_LE(std::abs(summary.mean()), 3.0 / std::sqrt(1e6));
}

TEST(GeneratePaths, SymmetricGeneratorsCenterWithinCltSlack) {
  // kHalveWhenBehind is a martingale but its sum is skewed, so it is left out.
  const GeneratorSpec gens[] = {gaussian_generator(), GeneratorSpec::scaled_gaussian(0.5, 1.0),
                                GeneratorSpec::sign_flip(1.0), GeneratorSpec::iid(DistributionSpec::uniform(1.0))};
  for (const auto& gen : gens) {
    const auto s = generate_paths(gen, 50, 20000, 5);
    // sd of a path mean is at most max|scale| / sqrt(T).
    const double slack = 4.0 * (1.0 / std::sqrt(50.0)) / std::sqrt(20000.0);
    EXPECT_LE(std::abs(s.mean()), slack) << gen.family_name();
    // Lower tail of the original vs upper tail of the mirror image.
    const double eps = 0.2;
    const double upper = static_cast<double>(s.count_above(eps)) / 20000.0;
    const double lower = static_cast<double>(s.count_below(eps)) / 20000.0;
    const double p = 0.5 * (upper + lower);
    EXPECT_LE(std::abs(upper - lower), 4.0 * std::sqrt(2.0 * p * (1 - p) / 20000.0) + 1e-12) << gen.family_name();
  }
}

TEST(GeneratePaths, SkewedSignFlipStillCentered) {
  const auto s = generate_paths(GeneratorSpec::sign_flip(1.0, MagnitudeRule::kHalveWhenBehind), 50, 20000, 5);
  EXPECT_LE(std::abs(s.mean()), 4.0 * (1.0 / std::sqrt(50.0)) / std::sqrt(20000.0));
}

TEST(GeneratePaths, Errors) {
  EXPECT_THROW(generate_paths(gaussian_generator(), 0, 10, 1), DomainError);
  EXPECT_THROW(generate_paths(gaussian_generator(), 10, 0, 1), DomainError);
  EXPECT_THROW(generate_paths(gaussian_generator(), 1000, 1000, 1, {.max_draws = 999999}), ResourceError);
  EXPECT_NO_THROW(generate_paths(gaussian_generator(), 1000, 1000, 1, {.max_draws = 1000000}));
}

TEST(SimulationSummary, QuantilesAndCounts) {
  auto summary = generate_paths(gaussian_generator(), 4, 10000, 21);
  const double levels[] = {0.01, 0.1, 0.5, 0.9, 0.99};
  annotate(summary, 0.5, levels);
  ASSERT_TRUE(summary.violations);
  EXPECT_LE(summary.violations->upper, summary.n_paths);
  EXPECT_LE(summary.violations->lower, summary.n_paths);
  for (std::size_t k = 1; k < summary.quantiles.size(); ++k) {
    EXPECT_LE(summary.quantiles[k - 1].second, summary.quantiles[k].second);
  }
  EXPECT_THROW(summary.quantile(1.0), DomainError);

  SimulationSummary tiny;
  tiny.sorted_means = {-2.0, -1.0, 0.0, 1.0, 2.0};
  EXPECT_EQ(tiny.quantile(0.2), -2.0);
  EXPECT_EQ(tiny.quantile(0.21), -1.0);
  EXPECT_EQ(tiny.quantile(0.99), 2.0);
  EXPECT_EQ(tiny.count_above(1.0), 1u);
  EXPECT_EQ(tiny.count_below(1.0), 1u);
}

TEST(ValidateBound, GaussianHasNoViolations) {
  const auto report = validate_bound(gaussian_generator(), 100, 0.05, 10000, 1);
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.details.at("upper_violations"), 0.0);
  EXPECT_EQ(report.details.at("lower_violations"), 0.0);
  EXPECT_NEAR(report.details.at("epsilon"), 1.295225877285593, 1e-12);
}

TEST(ValidateBound, SignFlipHasNoViolations) {
  const auto report = validate_bound(GeneratorSpec::sign_flip(1.0), 100, 0.01, 10000, 2);
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.details.at("upper_violations"), 0.0);
  EXPECT_EQ(report.details.at("lower_violations"), 0.0);
  // mpmath: sqrt(28 e ln 100 / 100)
  EXPECT_NEAR(report.details.at("epsilon"), 1.8721864547606313, 1e-12);
}

TEST(ValidateBound, ConstantZeroPasses) {
  const auto report = validate_bound(GeneratorSpec::constant_zero(), 10, 0.5, 100, 3);
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.worst_margin, 0.0);
}

TEST(ValidateBound, DetectsAnUnderstatedEnvelope) {
  // Declaring c far too large shrinks epsilon below the real spread.
  const GeneratorSpec liar(IidStep{DistributionSpec::gaussian(1.0)}, SubgaussianParams(1.0, 1e4));
  const auto report = validate_bound(liar, 10, 0.1, 5000, 4);
  EXPECT_FALSE(report.pass);
}

TEST(ValidateBound, ClassicAzumaAlsoHoldsForBoundedSteps) {
  const auto gen = GeneratorSpec::sign_flip(1.0, MagnitudeRule::kHalveWhenBehind);
  for (double delta : {0.1, 0.01}) {
    const auto summary = generate_paths(gen, 50, 20000, 6);
    const auto report = validate_bound(gen, summary, delta);
    const double limit = delta + binomial_slack(delta, 20000);
    EXPECT_LE(report.details.at("classic_upper_violations") / 20000.0, limit);
    EXPECT_LE(report.details.at("classic_lower_violations") / 20000.0, limit);
  }
}

TEST(ValidateBound, SubgaussianOverClassicRatioIsConstant) {
  for (std::uint64_t horizon : {1u, 7u, 100u, 5000u}) {
    for (double delta : {0.3, 0.05, 1e-6}) {
      for (double bound : {0.5, 1.0, 4.0}) {
        const double ratio = subgaussian_epsilon(params_from_bound(bound), horizon, delta) /
                             classic_azuma_epsilon(bound, horizon, delta);
        EXPECT_NEAR(ratio, std::sqrt(14.0 * std::numbers::e), 1e-12);
      }
    }
  }
}

TEST(Tightness, GaussianRatio) {
  const double ratio = tightness(gaussian_generator(), 100, 0.05, 100000, 12, {.jobs = 4});
  EXPECT_NEAR(ratio, 7.87, 0.3);
}

TEST(Tightness, SignFlipRatio) {
  const double ratio = tightness(GeneratorSpec::sign_flip(1.0), 100, 0.05, 100000, 13, {.jobs = 4});
  EXPECT_NEAR(ratio, 9.2, 0.5);
}

TEST(Tightness, ConstantZeroIsDegenerate) {
  EXPECT_THROW(tightness(GeneratorSpec::constant_zero(), 10, 0.05, 100, 1), DegenerateInputError);
}

TEST(ConditionalMean, ConstantZeroIsExact) {
  const auto report = conditional_mean_check(GeneratorSpec::constant_zero(), {3, 0.0, 0}, 100, 1);
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.details.at("mean"), 0.0);
}

TEST(ConditionalMean, ScaledGaussianEveryRegime) {
  const auto gen = GeneratorSpec::scaled_gaussian(0.5, 2.0);
  for (int regime : {0, 1}) {
    const auto report = conditional_mean_check(gen, {10, -3.0, regime}, 100000, 30 + regime);
    EXPECT_TRUE(report.pass) << regime;
    EXPECT_LE(std::abs(report.details.at("mean")), 4.0 * 2.0 / std::sqrt(1e5));
  }
}

TEST(ConditionalMean, SignFlipEveryHistory) {
  const auto gen = GeneratorSpec::sign_flip(1.0, MagnitudeRule::kHalveWhenBehind);
  for (double sum : {-4.0, 0.0, 4.0}) {
    const auto report = conditional_mean_check(gen, {8, sum, 0}, 100000, 40);
    EXPECT_TRUE(report.pass) << sum;
    EXPECT_LE(std::abs(report.details.at("mean")), 4.0 / std::sqrt(1e5));
  }
}

TEST(ConditionalMean, RejectsBadHistory) {
  EXPECT_THROW(conditional_mean_check(gaussian_generator(), {0, 0.0, 2}, 10, 1), DomainError);
  EXPECT_THROW(conditional_mean_check(gaussian_generator(), {0, 0.0, 0}, 1, 1), DomainError);
}

TEST(ConditionalTails, ScaledGaussianMeetsDeclaredEnvelope) {
  // From the high-volatility regime, empirical conditional tails stay under b e^{-c a^2}.
  const auto gen = GeneratorSpec::scaled_gaussian(0.5, 1.0);
  const auto& p = gen.declared_params();
  PathRng rng(77);
  const int n = 200000;
  std::vector<double> draws;
  for (int k = 0; k < n; ++k) {
    PathState state{0, 0.0, 1};
    draws.push_back(gen.draw(state, rng));
  }
  for (double a = 0.25; a <= 3.0; a += 0.25) {
    double upper = 0;
    double lower = 0;
    for (double z : draws) {
      upper += z > a;
      lower += z < -a;
    }
    const double envelope = p.b() * std::exp(-p.c() * a * a);
    EXPECT_LE(upper / n, envelope + 4.0 * std::sqrt(envelope / n));
    EXPECT_LE(lower / n, envelope + 4.0 * std::sqrt(envelope / n));
  }
}

TEST(PathMeansCsv, HeaderAndRows) {
  const auto summary = generate_paths(GeneratorSpec::constant_zero(), 2, 3, 1);
  std::ostringstream os;
  write_path_means_csv(summary, os);
  EXPECT_EQ(os.str(), "path_mean\n0\n0\n0\n");
}

}  // namespace
}  // namespace azuma
