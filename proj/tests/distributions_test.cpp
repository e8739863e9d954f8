#include "azuma/distributions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "azuma/errors.hpp"

namespace azuma {
namespace {

// Composite Simpson rule; test-only oracle.
double simpson(const std::function<double(double)>& f, double lo, double hi, int n = 20000) {
  const double h = (hi - lo) / n;
  double total = f(lo) + f(hi);
  for (int k = 1; k < n; ++k) total += f(lo + k * h) * (k % 2 ? 4.0 : 2.0);
  return total * h / 3.0;
}

TEST(DistributionSpec, RejectsNonPositiveParameters) {
  EXPECT_THROW(DistributionSpec::gaussian(0.0), DomainError);
  EXPECT_THROW(DistributionSpec::uniform(-1.0), DomainError);
  EXPECT_THROW(DistributionSpec::rademacher(std::nan("")), DomainError);
  EXPECT_THROW(DistributionSpec::laplace(0.0), DomainError);
}

TEST(DistributionSpec, DefaultDeclaredParams) {
  const auto g = DistributionSpec::gaussian(2.0).declared_params();
  ASSERT_TRUE(g);
  EXPECT_DOUBLE_EQ(g->b(), 1.0);
  EXPECT_DOUBLE_EQ(g->c(), 1.0 / 8.0);
  const auto r = DistributionSpec::rademacher(1.0).declared_params();
  ASSERT_TRUE(r);
  EXPECT_DOUBLE_EQ(r->b(), std::numbers::e);
  EXPECT_DOUBLE_EQ(r->c(), 1.0);
  EXPECT_FALSE(DistributionSpec::laplace(1.0).declared_params());
}

TEST(DistributionSpec, LaplaceCannotCarryDeclaredParams) {
  EXPECT_THROW(DistributionSpec(Laplace{1.0}, SubgaussianParams(1, 1)), DomainError);
  EXPECT_NO_THROW(DistributionSpec(Laplace{1.0}, std::nullopt));
}

TEST(DistributionSpec, UpperTails) {
  const auto g = DistributionSpec::gaussian(1.0);
  EXPECT_DOUBLE_EQ(g.upper_tail(0.0), 0.5);
  EXPECT_NEAR(g.upper_tail(1.6448536269514722), 0.05, 1e-15);

  const auto u = DistributionSpec::uniform(2.0);
  EXPECT_DOUBLE_EQ(u.upper_tail(1.0), 0.25);
  EXPECT_DOUBLE_EQ(u.upper_tail(3.0), 0.0);
  EXPECT_DOUBLE_EQ(u.upper_tail(-3.0), 1.0);

  const auto r = DistributionSpec::rademacher(1.0);
  EXPECT_DOUBLE_EQ(r.upper_tail(0.5), 0.5);
  EXPECT_DOUBLE_EQ(r.upper_tail(1.0), 0.5);
  EXPECT_DOUBLE_EQ(r.upper_tail(1.0001), 0.0);
  EXPECT_DOUBLE_EQ(r.upper_tail(-1.0), 1.0);

  const auto l = DistributionSpec::laplace(2.0);
  EXPECT_DOUBLE_EQ(l.upper_tail(1.0), 0.5 * std::exp(-2.0));
  EXPECT_DOUBLE_EQ(l.upper_tail(-1.0), 1.0 - 0.5 * std::exp(-2.0));
}

TEST(DistributionSpec, TailsAreSymmetric) {
  for (const auto& d : {DistributionSpec::gaussian(1.3), DistributionSpec::uniform(0.7),
                        DistributionSpec::rademacher(2.0), DistributionSpec::laplace(0.5)}) {
    for (double t = 0.05; t < 5.0; t += 0.05) {
      EXPECT_EQ(d.upper_tail(t), d.lower_tail(t));
      EXPECT_EQ(d.log_upper_tail(t), d.log_lower_tail(t));
    }
  }
}

TEST(DistributionSpec, GaussianLogTailFarOut) {
  // mpmath: ln(erfc(z/sqrt 2)/2)
  const auto g = DistributionSpec::gaussian(1.0);
  EXPECT_NEAR(g.log_upper_tail(5.0), -15.0649983939887257, 1e-10);
  EXPECT_NEAR(g.log_upper_tail(30.0), -454.321243956343197, 1e-9);
  EXPECT_NEAR(g.log_upper_tail(40.0), -804.608442013753788, 1e-9);
  EXPECT_NEAR(g.log_upper_tail(100.0), -5005.52420869420509, 1e-9);
  EXPECT_TRUE(std::isinf(DistributionSpec::uniform(1.0).log_upper_tail(1.0)));
}

TEST(DistributionSpec, SecondMomentsMatchDensityIntegrals) {
  const double gaussian = simpson(
      [](double x) { return x * x * std::exp(-x * x / (2 * 2.25)) / (1.5 * std::sqrt(2 * std::numbers::pi)); },
      -20, 20);
  EXPECT_NEAR(DistributionSpec::gaussian(1.5).second_moment(), gaussian, 1e-9);
  EXPECT_NEAR(DistributionSpec::uniform(2.0).second_moment(),
              simpson([](double x) { return x * x / 4.0; }, -2, 2), 1e-12);
  EXPECT_NEAR(DistributionSpec::laplace(2.0).second_moment(),
              2 * simpson([](double x) { return x * x * std::exp(-2 * x); }, 0, 40), 1e-9);
  EXPECT_DOUBLE_EQ(DistributionSpec::rademacher(3.0).second_moment(), 9.0);
}

TEST(DistributionSpec, Metadata) {
  EXPECT_EQ(DistributionSpec::laplace(4.0).family_name(), "laplace");
  EXPECT_DOUBLE_EQ(DistributionSpec::laplace(4.0).scale(), 0.25);
  EXPECT_EQ(DistributionSpec::laplace(4.0).mgf_radius(), 4.0);
  EXPECT_FALSE(DistributionSpec::gaussian(1.0).mgf_radius());
  EXPECT_EQ(DistributionSpec::uniform(2.0).hard_bound(), 2.0);
  EXPECT_FALSE(DistributionSpec::gaussian(1.0).hard_bound());
  EXPECT_FALSE(DistributionSpec::rademacher(1.0).is_continuous());
}

}  // namespace
}  // namespace azuma
