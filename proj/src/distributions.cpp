#include "azuma/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "azuma/errors.hpp"
#include "overloaded.hpp"

namespace azuma {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();


void require_positive(double v, const char* what) {
  if (!std::isfinite(v) || v <= 0.0) throw DomainError(what);
}

std::optional<SubgaussianParams> default_params(const DistributionFamily& family) {
  return std::visit(
      Overloaded{
          [](const CenteredGaussian& g) -> std::optional<SubgaussianParams> {
            return SubgaussianParams(1.0, 1.0 / (2.0 * g.sigma * g.sigma));
          },
          [](const UniformSymmetric& u) -> std::optional<SubgaussianParams> {
            return params_from_bound(u.half_width);
          },
          [](const Rademacher& r) -> std::optional<SubgaussianParams> {
            return params_from_bound(r.magnitude);
          },
          [](const Laplace&) -> std::optional<SubgaussianParams> { return std::nullopt; },
      },
      family);
}

// ln(erfc(x)/2 ) for x >= 0 via asymptotic expansion once erfc underflows.
double log_half_erfc(double x) {
  if (x < 26.0) return std::log(0.5 * std::erfc(x));
  const double inv2 = 1.0 / (2.0 * x * x);
  const double series = 1.0 - inv2 + 3.0 * inv2 * inv2 - 15.0 * inv2 * inv2 * inv2;
  return -x * x - std::log(x * std::sqrt(std::numbers::pi)) + std::log(series) - std::numbers::ln2;
}

}  // namespace

DistributionSpec::DistributionSpec(DistributionFamily family)
    : DistributionSpec(family, default_params(family)) {}

DistributionSpec::DistributionSpec(DistributionFamily family,
                                   std::optional<SubgaussianParams> declared)
    : family_(std::move(family)), declared_(declared) {
  std::visit(Overloaded{
                 [](const CenteredGaussian& g) { require_positive(g.sigma, "sigma must be > 0"); },
                 [](const UniformSymmetric& u) {
                   require_positive(u.half_width, "half_width must be > 0");
                 },
                 [](const Rademacher& r) { require_positive(r.magnitude, "magnitude must be > 0"); },
                 [](const Laplace& l) { require_positive(l.rate, "rate must be > 0"); },
             },
             family_);
  if (std::holds_alternative<Laplace>(family_) && declared_) {
    throw DomainError("laplace has no valid subgaussian parameters");
  }
}

std::string DistributionSpec::family_name() const {
  return std::visit(Overloaded{
                        [](const CenteredGaussian&) { return std::string("gaussian"); },
                        [](const UniformSymmetric&) { return std::string("uniform"); },
                        [](const Rademacher&) { return std::string("rademacher"); },
                        [](const Laplace&) { return std::string("laplace"); },
                    },
                    family_);
}

double DistributionSpec::upper_tail(double t) const {
  return std::visit(
      Overloaded{
          [t](const CenteredGaussian& g) { return 0.5 * std::erfc(t / (g.sigma * std::numbers::sqrt2)); },
          [t](const UniformSymmetric& u) {
            const double p = (u.half_width - t) / (2.0 * u.half_width);
            return std::clamp(p, 0.0, 1.0);
          },
          [t](const Rademacher& r) {
            if (t <= -r.magnitude) return 1.0;
            if (t <= r.magnitude) return 0.5;
            return 0.0;
          },
          [t](const Laplace& l) {
            if (t >= 0.0) return 0.5 * std::exp(-l.rate * t);
            return 1.0 - 0.5 * std::exp(l.rate * t);
          },
      },
      family_);
}

double DistributionSpec::lower_tail(double t) const { return upper_tail(t); }

double DistributionSpec::log_upper_tail(double t) const {
  if (t <= 0.0) return std::log(upper_tail(t));
  return std::visit(
      Overloaded{
          [t](const CenteredGaussian& g) { return log_half_erfc(t / (g.sigma * std::numbers::sqrt2)); },
          [t](const UniformSymmetric& u) {
            if (t >= u.half_width) return kNegInf;
            return std::log((u.half_width - t) / (2.0 * u.half_width));
          },
          [t](const Rademacher& r) { return t <= r.magnitude ? -std::numbers::ln2 : kNegInf; },
          [t](const Laplace& l) { return -std::numbers::ln2 - l.rate * t; },
      },
      family_);
}

double DistributionSpec::log_lower_tail(double t) const { return log_upper_tail(t); }

double DistributionSpec::second_moment() const {
  return std::visit(Overloaded{
                        [](const CenteredGaussian& g) { return g.sigma * g.sigma; },
                        [](const UniformSymmetric& u) { return u.half_width * u.half_width / 3.0; },
                        [](const Rademacher& r) { return r.magnitude * r.magnitude; },
                        [](const Laplace& l) { return 2.0 / (l.rate * l.rate); },
                    },
                    family_);
}

double DistributionSpec::scale() const {
  return std::visit(Overloaded{
                        [](const CenteredGaussian& g) { return g.sigma; },
                        [](const UniformSymmetric& u) { return u.half_width; },
                        [](const Rademacher& r) { return r.magnitude; },
                        [](const Laplace& l) { return 1.0 / l.rate; },
                    },
                    family_);
}

bool DistributionSpec::is_continuous() const { return !std::holds_alternative<Rademacher>(family_); }

std::optional<double> DistributionSpec::mgf_radius() const {
  if (const auto* l = std::get_if<Laplace>(&family_)) return l->rate;
  return std::nullopt;
}

std::optional<double> DistributionSpec::hard_bound() const {
  if (const auto* u = std::get_if<UniformSymmetric>(&family_)) return u->half_width;
  if (const auto* r = std::get_if<Rademacher>(&family_)) return r->magnitude;
  return std::nullopt;
}

}  // namespace azuma
