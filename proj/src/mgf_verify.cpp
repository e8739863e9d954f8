#include "azuma/mgf_verify.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "azuma/errors.hpp"
#include "azuma/grid.hpp"
#include "overloaded.hpp"

namespace azuma {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuadratureTolerance = 1e-9;
constexpr unsigned kQuadratureDepth = 20;
// ln(1e-16)
const double kLogTermCutoff = std::log(1e-16);

double log_add_exp(double x, double y) {
  if (x == -kInf) return y;
  if (y == -kInf) return x;
  const double hi = std::max(x, y);
  return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

// exp() that stays finite for reporting; callers keep the log value alongside.
double bounded_exp(double x) { return x < 700.0 ? std::exp(x) : kInf; }

class LogSumAccumulator {
 public:
  void add(double exponent) {
    if (exponent == -kInf) return;
    if (exponent > max_) {
      sum_ = sum_ * std::exp(max_ - exponent) + 1.0;
      max_ = exponent;
    } else {
      sum_ += std::exp(exponent - max_);
    }
  }
  double value() const { return sum_ == 0.0 ? -kInf : max_ + std::log(sum_); }

 private:
  double max_ = -kInf;
  double sum_ = 0.0;
};

// ln(sinh(x)/x), x >= 0. Below 1, sinh(x) - x is summed as a Taylor series
// so the log1p argument keeps full precision.
double log_sinhc(double x) {
  if (x == 0.0) return 0.0;
  if (x < 1.0) {
    const double x2 = x * x;
    double term = x * x2 / 6.0;
    double excess = 0.0;
    for (int k = 3; term > 1e-18 * excess || excess == 0.0; k += 2) {
      excess += term;
      term *= x2 / ((k + 1.0) * (k + 2.0));
      if (term == 0.0) break;
    }
    return std::log1p(excess / x);
  }
  if (x < 20.0) return std::log(std::sinh(x) / x);
  return x - std::numbers::ln2 - std::log(x) + std::log1p(-std::exp(-2.0 * x));
}

// ln(cosh(x)), x >= 0.
double log_cosh(double x) {
  if (x < 20.0) {
    const double h = std::sinh(0.5 * x);
    return std::log1p(2.0 * h * h);
  }
  return x - std::numbers::ln2 + std::log1p(std::exp(-2.0 * x));
}

template <class F>
double integrate(F f, double lo, double hi) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, lo, hi, kQuadratureDepth, kQuadratureTolerance);
}

std::string describe_grid(const char* kind, std::span<const double> grid) {
  std::ostringstream os;
  os.precision(17);
  os << kind << ", " << grid.size() << " points";
  if (!grid.empty()) {
    os << ", [" << *std::min_element(grid.begin(), grid.end()) << ", "
       << *std::max_element(grid.begin(), grid.end()) << "]";
  }
  return os.str();
}

std::map<std::string, double> point(const char* name, double value) { return {{name, value}}; }

void require_envelope(const DistributionSpec& dist, const SubgaussianParams& params) {
  const auto report =
      tail_envelope_check(dist, params, envelope_precondition_extent(dist, params), 400);
  if (!report.pass) {
    std::ostringstream os;
    os << dist.family_name() << " violates the tail envelope (b=" << params.b()
       << ", c=" << params.c() << ")";
    if (auto it = report.details.find("first_failure_a"); it != report.details.end()) {
      os << " first at a=" << it->second;
    }
    throw PreconditionError(os.str());
  }
}

void require_s_grid(const DistributionSpec& dist, const SubgaussianParams& params,
                    std::span<const double> s_grid) {
  if (s_grid.empty()) throw PreconditionError("empty s grid");
  for (double s : s_grid) {
    if (!std::isfinite(s) || s <= 0.0) throw PreconditionError("s grid must be positive and finite");
  }
  const double root_c = std::sqrt(params.c());
  const auto [lo, hi] = std::minmax_element(s_grid.begin(), s_grid.end());
  constexpr double kSlack = 1e-9;
  if (*lo > 1e-3 * root_c * (1.0 + kSlack) || *hi < 10.0 * root_c * (1.0 - kSlack)) {
    throw PreconditionError("s grid must span [1e-3 sqrt(c), 10 sqrt(c)]");
  }
  require_envelope(dist, params);
  if (auto radius = dist.mgf_radius(); radius && *hi >= *radius) {
    throw DomainError("s grid leaves the MGF domain");
  }
}

}  // namespace

double log_mgf(const DistributionSpec& dist, double s) {
  if (!std::isfinite(s)) throw DomainError("s must be finite");
  return std::visit(Overloaded{
                        [s](const CenteredGaussian& g) { return 0.5 * g.sigma * g.sigma * s * s; },
                        [s](const UniformSymmetric& u) { return log_sinhc(std::abs(s) * u.half_width); },
                        [s](const Rademacher& r) { return log_cosh(std::abs(s) * r.magnitude); },
                        [s](const Laplace& l) {
                          if (std::abs(s) >= l.rate) throw DomainError("laplace MGF needs |s| < rate");
                          const double q = s / l.rate;
                          return -std::log1p(-q * q);
                        },
                    },
                    dist.family());
}

double log_mgf_quadrature(const DistributionSpec& dist, double s) {
  if (!std::isfinite(s)) throw DomainError("s must be finite");
  return std::visit(
      Overloaded{
          [s](const CenteredGaussian& g) {
            const double var = g.sigma * g.sigma;
            const double mode = s * var;
            const double peak = s * mode - mode * mode / (2.0 * var);
            const double norm = 1.0 / (g.sigma * std::sqrt(2.0 * std::numbers::pi));
            auto density = [&](double x) { return norm * std::exp(s * x - x * x / (2.0 * var) - peak); };
            const double half = 12.0 * g.sigma;
            const double mass = integrate(density, mode - half, mode) + integrate(density, mode, mode + half);
            return std::log(mass) + peak;
          },
          [s](const UniformSymmetric& u) {
            const double width = u.half_width;
            const double peak = std::abs(s) * width;
            auto density = [&](double x) { return std::exp(s * x - peak) / (2.0 * width); };
            return std::log(integrate(density, -width, width)) + peak;
          },
          [s](const Rademacher& r) {
            return log_add_exp(s * r.magnitude, -s * r.magnitude) - std::numbers::ln2;
          },
          [s](const Laplace& l) {
            if (std::abs(s) >= l.rate) throw DomainError("laplace MGF needs |s| < rate");
            const double half = 0.5 * l.rate;
            auto right = [&](double x) { return half * std::exp((s - l.rate) * x); };
            auto left = [&](double x) { return half * std::exp(-(s + l.rate) * x); };
            return std::log(integrate(right, 0.0, kInf) + integrate(left, 0.0, kInf));
          },
      },
      dist.family());
}

VerificationReport tail_envelope_check(const DistributionSpec& dist, const SubgaussianParams& params,
                                       double a_max, std::size_t n_grid) {
  if (n_grid < 2) throw DomainError("tail envelope grid needs at least 2 points");
  if (!std::isfinite(a_max) || a_max <= 0.0) throw DomainError("a_max must be finite and > 0");

  const double log_b = std::log(params.b());
  double worst = -kInf;
  double worst_a = 0.0;
  double first_failure = kInf;
  double failures = 0.0;
  for (double a : open_linear_grid(a_max, n_grid)) {
    const double log_envelope = log_b - params.c() * a * a;
    const double log_tail = std::max(dist.log_upper_tail(a), dist.log_lower_tail(a));
    const double log_ratio = log_tail - log_envelope;
    if (log_ratio > worst) {
      worst = log_ratio;
      worst_a = a;
    }
    if (log_ratio > 0.0) {
      failures += 1.0;
      first_failure = std::min(first_failure, a);
    }
  }

  auto report = make_report("tail_envelope", bounded_exp(worst), Direction::kAtMost, 1.0,
                            point("a", worst_a), describe_grid("linear a grid over (0, a_max]", open_linear_grid(a_max, n_grid)));
  report.details["a_max"] = a_max;
  report.details["failing_points"] = failures;
  if (failures > 0.0) report.details["first_failure_a"] = first_failure;
  return report;
}

double envelope_precondition_extent(const DistributionSpec& dist, const SubgaussianParams& params) {
  return 2.0 * (1.0 + dist.scale()) * std::max(1.0, 1.0 / std::sqrt(params.c()));
}

std::vector<double> default_s_grid(const SubgaussianParams& params, std::size_t n) {
  const double root_c = std::sqrt(params.c());
  return log_grid(1e-3 * root_c, 10.0 * root_c, n);
}

VerificationReport verify_mgf_lemma(const DistributionSpec& dist, const SubgaussianParams& params,
                                    std::span<const double> s_grid) {
  require_s_grid(dist, params, s_grid);

  const double breakpoint = std::sqrt(params.c()) / 2.0;
  double worst = -kInf;
  double worst_s = 0.0;
  double below = 0.0;
  for (double s : s_grid) {
    const double ratio = log_mgf(dist, s) / mgf_envelope(s, params);
    if (ratio > worst) {
      worst = ratio;
      worst_s = s;
    }
    if (s <= breakpoint) below += 1.0;
  }
  auto report = make_report("mgf_lemma", worst, Direction::kAtMost, 1.0, point("s", worst_s),
                            describe_grid("log s grid", s_grid));
  report.details["breakpoint_s"] = breakpoint;
  report.details["points_at_or_below_breakpoint"] = below;
  report.details["points_above_breakpoint"] = static_cast<double>(s_grid.size()) - below;
  return report;
}

VerificationReport second_moment_check(const DistributionSpec& dist, const SubgaussianParams& params) {
  require_envelope(dist, params);
  const double moment = dist.second_moment();
  const double envelope = second_moment_envelope(params);
  auto report = make_report("second_moment", moment / envelope, Direction::kAtMost, 1.0,
                            point("b", params.b()), "exact moment, no grid");
  report.worst_point["c"] = params.c();
  report.details["second_moment"] = moment;
  report.details["envelope"] = envelope;
  return report;
}

double tighten_constant(const DistributionSpec& dist, const SubgaussianParams& params,
                        std::span<const double> s_grid) {
  require_s_grid(dist, params, s_grid);
  double best = 0.0;
  for (double s : s_grid) {
    best = std::max(best, log_mgf(dist, s) * params.c() / (params.b() * s * s));
  }
  return best;
}

ProofSeries proof_series(double ratio, std::uint64_t split) {
  if (!std::isfinite(ratio) || ratio <= 0.0) throw DomainError("series ratio c/s^2 must be > 0");
  LogSumAccumulator initial;
  LogSumAccumulator tail;
  std::uint64_t j = 1;
  for (;; ++j) {
    const double jd = static_cast<double>(j);
    const double exponent = jd * (2.0 - ratio * jd);
    if (j <= split) {
      initial.add(exponent);
      continue;
    }
    tail.add(exponent);
    const double next = (jd + 1.0) * (2.0 - ratio * (jd + 1.0));
    if (exponent < kLogTermCutoff && next < exponent) break;
  }
  return {initial.value(), tail.value(), j};
}

VerificationReport verify_series_small_s(double c, double s) {
  if (!std::isfinite(c) || c <= 0.0 || !std::isfinite(s) || s <= 0.0) {
    throw DomainError("series check needs c > 0 and s > 0");
  }
  if (s > std::sqrt(c) / 2.0) throw PreconditionError("small-s branch needs s <= sqrt(c)/2");

  const double ratio = c / (s * s);
  const ProofSeries series = proof_series(ratio, 0);
  const double log_sum = series.log_tail;
  const double log_geometric = -ratio / 2.0 - std::log1p(-std::exp(-ratio / 2.0));
  const double log_two_exp = std::numbers::ln2 - ratio / 2.0;
  const double log_quadratic = std::log(4.0) - std::log(ratio);

  const double margin = std::max(log_sum - log_two_exp, log_sum - log_quadratic);
  auto report = make_report("series_small_s", margin, Direction::kAtMost, 0.0, point("s", s),
                            "direct summation until terms < 1e-16");
  report.worst_point["c"] = c;
  report.details["c_over_s2"] = ratio;
  report.details["series_sum"] = std::exp(log_sum);
  report.details["log_series_sum"] = log_sum;
  report.details["geometric_bound"] = std::exp(log_geometric);
  report.details["two_exp_bound"] = std::exp(log_two_exp);
  report.details["four_s2_over_c_bound"] = std::exp(log_quadratic);
  report.details["terms"] = static_cast<double>(series.terms);
  return report;
}

VerificationReport verify_series_large_s(double c, double s) {
  if (!std::isfinite(c) || c <= 0.0 || !std::isfinite(s) || s <= 0.0) {
    throw DomainError("series check needs c > 0 and s > 0");
  }
  if (s <= std::sqrt(c) / 2.0) throw PreconditionError("large-s branch needs s > sqrt(c)/2");

  const double ratio = c / (s * s);
  const double u = (s * s) / c;
  if (u > 1e7) throw PreconditionError("s^2/c too large for direct summation");
  const auto split = static_cast<std::uint64_t>(std::floor(3.0 * u));
  const ProofSeries series = proof_series(ratio, split);

  const double growth = 1.0 + 1.0 / std::numbers::e;
  const double log_full = log_add_exp(series.log_initial, series.log_tail);
  const double log_initial_bound = std::log(3.0 * u) + u;
  const double log_full_bound = log_add_exp(std::log(8.0 * u), growth * u);

  const double tail_margin = series.log_tail - std::numbers::ln2;
  const double initial_margin = series.log_initial - log_initial_bound;
  const double full_margin = log_full - log_full_bound;
  const double exp_link_margin = log_initial_bound - growth * u;

  const double margin = std::max({tail_margin, initial_margin, full_margin});
  auto report = make_report("series_large_s", margin, Direction::kAtMost, 0.0, point("s", s),
                            "direct log-space summation until terms < 1e-16");
  report.worst_point["c"] = c;
  report.details["s2_over_c"] = u;
  report.details["split_index"] = static_cast<double>(split);
  report.details["log_initial_sum"] = series.log_initial;
  report.details["log_tail_sum"] = series.log_tail;
  report.details["log_full_sum"] = log_full;
  report.details["initial_sum"] = bounded_exp(series.log_initial);
  report.details["tail_sum"] = bounded_exp(series.log_tail);
  report.details["initial_bound"] = bounded_exp(log_initial_bound);
  report.details["full_bound"] = bounded_exp(log_full_bound);
  report.details["tail_margin"] = tail_margin;
  report.details["initial_margin"] = initial_margin;
  report.details["full_margin"] = full_margin;
  report.details["exp_link_margin"] = exp_link_margin;
  report.details["exp_link_holds"] = exp_link_margin <= 0.0 ? 1.0 : 0.0;
  report.details["terms"] = static_cast<double>(series.terms);
  if (exp_link_margin > 0.0) {
    report.notes.push_back("3u e^u exceeds e^{(1+1/e)u} here; not a pass condition");
  }
  return report;
}

VerificationReport verify_scalar_inequality(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || a < 0.25 || b < 1.0) {
    throw PreconditionError("scalar inequality needs a >= 1/4 and b >= 1");
  }
  const double growth = 1.0 + 1.0 / std::numbers::e;
  const double x = b * a;
  const double log_rhs = 7.0 * x;
  const double log_affine = std::log1p(10.0 * x);
  const double log_literal = log_add_exp(log_affine, growth * x);
  const double log_derivation = log_add_exp(log_affine, std::log(b) + growth * a);
  const double slack_literal = log_rhs - log_literal;
  const double slack_derivation = log_rhs - log_derivation;

  auto report = make_report("scalar_inequality", std::min(slack_literal, slack_derivation),
                            Direction::kAtLeast, 0.0, point("a", a), "single point");
  report.worst_point["b"] = b;
  report.details["slack_literal"] = slack_literal;
  report.details["slack_derivation"] = slack_derivation;
  report.details["lhs_literal"] = bounded_exp(log_literal);
  report.details["lhs_derivation"] = bounded_exp(log_derivation);
  report.details["rhs"] = bounded_exp(log_rhs);
  return report;
}

VerificationReport verify_scalar_inequality_grid(std::span<const double> a_values,
                                                 std::span<const double> b_values) {
  if (a_values.empty() || b_values.empty()) throw DomainError("empty grid");
  VerificationReport worst;
  bool first = true;
  for (double b : b_values) {
    for (double a : a_values) {
      auto report = verify_scalar_inequality(a, b);
      if (first || report.worst_margin < worst.worst_margin) {
        worst = std::move(report);
        first = false;
      }
    }
  }
  std::ostringstream os;
  os << a_values.size() << " a values x " << b_values.size() << " b values";
  worst.grid = os.str();
  return worst;
}

std::vector<double> scalar_a_grid() {
  std::vector<double> out;
  for (int k = 0; k <= 100; ++k) out.push_back(0.25 + 0.05 * k);
  return out;
}

std::vector<double> scalar_b_grid() { return {1.0, 1.5, 2.0, 5.0, 10.0}; }

std::vector<double> small_s_grid(double c, std::size_t n) {
  return open_linear_grid(std::sqrt(c) / 2.0, n);
}

std::vector<double> large_s_grid(double c, std::size_t n) {
  const double lo = std::sqrt(c) / 2.0;
  const double hi = 20.0 * std::sqrt(c);
  std::vector<double> out = open_linear_grid(hi - lo, n);
  for (double& s : out) s += lo;
  out.back() = hi;
  return out;
}

}  // namespace azuma
