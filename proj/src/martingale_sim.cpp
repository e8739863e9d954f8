#include "azuma/martingale_sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

#include "azuma/errors.hpp"
#include "azuma/number_format.hpp"
#include "overloaded.hpp"

namespace azuma {
namespace {

SubgaussianParams default_params(const GeneratorFamily& family) {
  return std::visit(
      Overloaded{
          [](const IidStep& step) {
            if (!step.dist.declared_params()) {
              throw DomainError("iid_step needs a distribution with declared subgaussian params");
            }
            return *step.dist.declared_params();
          },
          [](const ScaledGaussian& g) {
            return SubgaussianParams(1.0, 1.0 / (2.0 * g.sigma_max * g.sigma_max));
          },
          [](const BoundedSignFlip& f) { return params_from_bound(f.max_magnitude); },
          [](const ConstantZero&) { return SubgaussianParams(1.0, 1.0); },
      },
      family);
}

void validate_family(const GeneratorFamily& family) {
  if (const auto* g = std::get_if<ScaledGaussian>(&family)) {
    if (!(std::isfinite(g->sigma_min) && g->sigma_min > 0.0 && std::isfinite(g->sigma_max) &&
          g->sigma_min <= g->sigma_max)) {
      throw DomainError("scaled_gaussian needs 0 < sigma_min <= sigma_max");
    }
    if (!(g->switch_probability >= 0.0 && g->switch_probability <= 1.0)) {
      throw DomainError("switch_probability must lie in [0, 1]");
    }
  } else if (const auto* f = std::get_if<BoundedSignFlip>(&family)) {
    if (!(std::isfinite(f->max_magnitude) && f->max_magnitude > 0.0)) {
      throw DomainError("max_magnitude must be > 0");
    }
  }
}

double draw_from(const DistributionSpec& dist, PathRng& rng) {
  return std::visit(Overloaded{
                        [&](const CenteredGaussian& g) { return g.sigma * rng.normal(); },
                        [&](const UniformSymmetric& u) { return u.half_width * (2.0 * rng.unit() - 1.0); },
                        [&](const Rademacher& r) { return rng.unit() < 0.5 ? r.magnitude : -r.magnitude; },
                        [&](const Laplace& l) {
                          const double sign = rng.unit() < 0.5 ? 1.0 : -1.0;
                          return sign * -std::log1p(-rng.unit()) / l.rate;
                        },
                    },
                    dist.family());
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void check_sizes(std::uint64_t horizon, std::uint64_t n_paths) {
  if (horizon < 1) throw DomainError("horizon T must be >= 1");
  if (n_paths < 1) throw DomainError("n_paths must be >= 1");
}

}  // namespace

GeneratorSpec::GeneratorSpec(GeneratorFamily family)
    : family_((validate_family(family), std::move(family))), declared_(default_params(family_)) {}

GeneratorSpec::GeneratorSpec(GeneratorFamily family, SubgaussianParams declared)
    : family_((validate_family(family), std::move(family))), declared_(declared) {}

std::string GeneratorSpec::family_name() const {
  return std::visit(Overloaded{
                        [](const IidStep&) { return std::string("iid_step"); },
                        [](const ScaledGaussian&) { return std::string("scaled_gaussian"); },
                        [](const BoundedSignFlip&) { return std::string("bounded_sign_flip"); },
                        [](const ConstantZero&) { return std::string("constant_zero"); },
                    },
                    family_);
}

std::optional<double> GeneratorSpec::hard_bound() const {
  if (const auto* step = std::get_if<IidStep>(&family_)) return step->dist.hard_bound();
  if (const auto* flip = std::get_if<BoundedSignFlip>(&family_)) return flip->max_magnitude;
  return std::nullopt;
}

double GeneratorSpec::draw(PathState& state, PathRng& rng) const {
  const double z = std::visit(
      Overloaded{
          [&](const IidStep& step) { return draw_from(step.dist, rng); },
          [&](const ScaledGaussian& g) {
            const double sigma = state.regime == 0 ? g.sigma_min : g.sigma_max;
            const double value = sigma * rng.normal();
            if (rng.unit() < g.switch_probability) state.regime ^= 1;
            return value;
          },
          [&](const BoundedSignFlip& f) {
            double magnitude = f.max_magnitude;
            if (f.rule == MagnitudeRule::kHalveWhenBehind && state.running_sum < 0.0) magnitude *= 0.5;
            return rng.unit() < 0.5 ? magnitude : -magnitude;
          },
          [](const ConstantZero&) { return 0.0; },
      },
      family_);
  ++state.step;
  state.running_sum += z;
  return z;
}

std::uint64_t path_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

double SimulationSummary::quantile(double level) const {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
  if (sorted_means.empty()) throw DomainError("empty sample");
  const auto n = static_cast<double>(sorted_means.size());
  auto rank = static_cast<std::size_t>(std::ceil(level * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted_means.size());
  return sorted_means[rank - 1];
}

std::uint64_t SimulationSummary::count_above(double epsilon) const {
  return static_cast<std::uint64_t>(sorted_means.end() -
                                    std::upper_bound(sorted_means.begin(), sorted_means.end(), epsilon));
}

std::uint64_t SimulationSummary::count_below(double epsilon) const {
  return static_cast<std::uint64_t>(std::lower_bound(sorted_means.begin(), sorted_means.end(), -epsilon) -
                                    sorted_means.begin());
}

double SimulationSummary::mean() const {
  double total = 0.0;
  for (double m : path_means) total += m;
  return path_means.empty() ? 0.0 : total / static_cast<double>(path_means.size());
}

SimulationSummary generate_paths(const GeneratorSpec& gen, std::uint64_t horizon,
                                 std::uint64_t n_paths, std::uint64_t seed,
                                 const SimulationOptions& options) {
  check_sizes(horizon, n_paths);
  if (n_paths > options.max_draws / horizon) {
    std::ostringstream os;
    os << "simulation needs " << n_paths << " x " << horizon << " draws, budget is "
       << options.max_draws;
    throw ResourceError(os.str());
  }

  SimulationSummary summary;
  summary.n_paths = n_paths;
  summary.horizon = horizon;
  summary.seed = seed;
  summary.path_means.resize(n_paths);

  auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      PathRng rng(path_seed(seed, i));
      PathState state;
      for (std::uint64_t t = 0; t < horizon; ++t) gen.draw(state, rng);
      summary.path_means[i] = state.running_sum / static_cast<double>(horizon);
    }
  };

  const std::uint64_t jobs = std::clamp<std::uint64_t>(options.jobs, 1, n_paths);
  if (jobs == 1) {
    run_range(0, n_paths);
  } else {
    std::vector<std::jthread> workers;
    const std::uint64_t chunk = (n_paths + jobs - 1) / jobs;
    for (std::uint64_t begin = 0; begin < n_paths; begin += chunk) {
      workers.emplace_back(run_range, begin, std::min(n_paths, begin + chunk));
    }
  }

  summary.sorted_means = summary.path_means;
  std::sort(summary.sorted_means.begin(), summary.sorted_means.end());
  return summary;
}

void annotate(SimulationSummary& summary, double epsilon, std::span<const double> levels) {
  summary.violations = TailCounts{epsilon, summary.count_above(epsilon), summary.count_below(epsilon)};
  summary.quantiles.clear();
  for (double level : levels) summary.quantiles.emplace_back(level, summary.quantile(level));
}

double binomial_slack(double delta, std::uint64_t n_paths) {
  return 3.0 * std::sqrt(delta * (1.0 - delta) / static_cast<double>(n_paths));
}

VerificationReport validate_bound(const GeneratorSpec& gen, const SimulationSummary& summary,
                                  double delta) {
  const double epsilon = subgaussian_epsilon(gen.declared_params(), summary.horizon, delta);
  const auto n = static_cast<double>(summary.n_paths);
  const std::uint64_t upper = summary.count_above(epsilon);
  const std::uint64_t lower = summary.count_below(epsilon);
  const double upper_rate = static_cast<double>(upper) / n;
  const double lower_rate = static_cast<double>(lower) / n;
  const double limit = delta + binomial_slack(delta, summary.n_paths);

  auto report = make_report("theorem_bound", std::max(upper_rate, lower_rate), Direction::kAtMost,
                            limit, {{"T", static_cast<double>(summary.horizon)}, {"delta", delta}},
                            "monte carlo, " + std::to_string(summary.n_paths) + " paths");
  report.details["epsilon"] = epsilon;
  report.details["upper_violations"] = static_cast<double>(upper);
  report.details["lower_violations"] = static_cast<double>(lower);
  report.details["upper_rate"] = upper_rate;
  report.details["lower_rate"] = lower_rate;
  report.details["binomial_slack"] = binomial_slack(delta, summary.n_paths);
  report.details["n_paths"] = n;
  if (auto bound = gen.hard_bound()) {
    const double classic = classic_azuma_epsilon(*bound, summary.horizon, delta);
    report.details["epsilon_classic"] = classic;
    report.details["classic_upper_violations"] = static_cast<double>(summary.count_above(classic));
    report.details["classic_lower_violations"] = static_cast<double>(summary.count_below(classic));
  }
  report.notes.push_back("lower tail checked by symmetry of the envelope; the bound covers the upper deviation");
  return report;
}

VerificationReport validate_bound(const GeneratorSpec& gen, std::uint64_t horizon, double delta,
                                  std::uint64_t n_paths, std::uint64_t seed,
                                  const SimulationOptions& options) {
  subgaussian_epsilon(gen.declared_params(), horizon, delta);  // domain checks before simulating
  return validate_bound(gen, generate_paths(gen, horizon, n_paths, seed, options), delta);
}

double tightness(const GeneratorSpec& gen, const SimulationSummary& summary, double delta) {
  if (gen.is_degenerate()) throw DegenerateInputError("tightness is undefined for constant_zero");
  const double epsilon = subgaussian_epsilon(gen.declared_params(), summary.horizon, delta);
  const double q = summary.quantile(1.0 - delta);
  if (!(q > 0.0)) throw DegenerateInputError("empirical quantile is not positive");
  return epsilon / q;
}

double tightness(const GeneratorSpec& gen, std::uint64_t horizon, double delta,
                 std::uint64_t n_paths, std::uint64_t seed, const SimulationOptions& options) {
  if (gen.is_degenerate()) throw DegenerateInputError("tightness is undefined for constant_zero");
  subgaussian_epsilon(gen.declared_params(), horizon, delta);
  return tightness(gen, generate_paths(gen, horizon, n_paths, seed, options), delta);
}

VerificationReport conditional_mean_check(const GeneratorSpec& gen, const PathState& history,
                                          std::uint64_t n_samples, std::uint64_t seed) {
  if (n_samples < 2) throw DomainError("conditional mean check needs at least 2 samples");
  if (history.regime != 0 && history.regime != 1) throw DomainError("regime must be 0 or 1");
  if (!std::isfinite(history.running_sum)) throw DomainError("running sum must be finite");

  PathRng rng(path_seed(seed, 0));
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t k = 0; k < n_samples; ++k) {
    PathState state = history;
    const double z = gen.draw(state, rng);
    const double delta = z - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (z - mean);
  }
  const double sd = std::sqrt(m2 / static_cast<double>(n_samples - 1));
  const double limit = 4.0 * sd / std::sqrt(static_cast<double>(n_samples));

  auto report = make_report("conditional_mean", std::abs(mean), Direction::kAtMost, limit,
                            {{"step", static_cast<double>(history.step)},
                             {"running_sum", history.running_sum},
                             {"regime", static_cast<double>(history.regime)}},
                            std::to_string(n_samples) + " conditional samples");
  report.details["mean"] = mean;
  report.details["sd"] = sd;
  return report;
}

void write_path_means_csv(const SimulationSummary& summary, std::ostream& out) {
  out << "path_mean\n";
  for (double m : summary.path_means) out << shortest(m) << '\n';
}

}  // namespace azuma
