#include "azuma/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "overloaded.hpp"

namespace azuma::cli {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw std::invalid_argument(message); }

// Names end up in CSV cells and file names.
std::string checked_name(std::string name) {
  if (name.empty()) fail("entry names must be non-empty");
  for (char ch : name) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_' ||
                    ch == '-' || ch == '.';
    if (!ok) fail("name '" + name + "' may only contain letters, digits, '_', '-' and '.'");
  }
  return name;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(std::string("config key '") + key + "' has the wrong type");
  }
}

double require_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number()) fail(where + ": missing numeric '" + key + "'");
  return j.at(key).get<double>();
}

std::optional<SubgaussianParams> params_from(const json& j, const std::string& where) {
  const bool has_b = j.contains("b");
  const bool has_c = j.contains("c");
  if (!has_b && !has_c) return std::nullopt;
  if (has_b != has_c) fail(where + ": 'b' and 'c' must be given together");
  return SubgaussianParams(require_number(j, "b", where), require_number(j, "c", where));
}

json params_json(const SubgaussianParams& p) { return {{"b", p.b()}, {"c", p.c()}}; }

GeneratorSpec generator_from_json(const json& j, const std::string& where) {
  const std::string family = get_or<std::string>(j, "family", "");
  const auto declared = params_from(j, where);
  auto build = [&](GeneratorFamily f) { return declared ? GeneratorSpec(std::move(f), *declared) : GeneratorSpec(std::move(f)); };
  if (family == "iid_step") {
    if (!j.contains("dist")) fail(where + ": iid_step needs 'dist'");
    return build(IidStep{distribution_from_json(j.at("dist"), std::nullopt)});
  }
  if (family == "scaled_gaussian") {
    return build(ScaledGaussian{require_number(j, "sigma_min", where), require_number(j, "sigma_max", where),
                                get_or<double>(j, "switch_probability", 0.1)});
  }
  if (family == "bounded_sign_flip") {
    const std::string rule = get_or<std::string>(j, "magnitude_rule", "constant");
    MagnitudeRule parsed = MagnitudeRule::kConstant;
    if (rule == "halve_when_behind") {
      parsed = MagnitudeRule::kHalveWhenBehind;
    } else if (rule != "constant") {
      fail(where + ": unknown magnitude_rule '" + rule + "'");
    }
    return build(BoundedSignFlip{require_number(j, "max_magnitude", where), parsed});
  }
  if (family == "constant_zero") return build(ConstantZero{});
  fail(where + ": unknown generator family '" + family + "'");
}

json generator_to_json(const GeneratorEntry& entry) {
  json j = std::visit(
      Overloaded{
          [](const IidStep& s) { return json{{"family", "iid_step"}, {"dist", distribution_to_json(s.dist)}}; },
          [](const ScaledGaussian& g) {
            return json{{"family", "scaled_gaussian"},
                        {"sigma_min", g.sigma_min},
                        {"sigma_max", g.sigma_max},
                        {"switch_probability", g.switch_probability}};
          },
          [](const BoundedSignFlip& f) {
            return json{{"family", "bounded_sign_flip"},
                        {"max_magnitude", f.max_magnitude},
                        {"magnitude_rule", f.rule == MagnitudeRule::kConstant ? "constant" : "halve_when_behind"}};
          },
          [](const ConstantZero&) { return json{{"family", "constant_zero"}}; },
      },
      entry.gen.family());
  j["name"] = entry.name;
  j.update(params_json(entry.gen.declared_params()));
  return j;
}

DistributionEntry distribution_entry_from_json(const json& j, const std::string& where) {
  const auto params = params_from(j, where);
  const std::string family = get_or<std::string>(j, "family", "");
  const bool control = family == "laplace";
  DistributionSpec dist = distribution_from_json(j, control ? std::nullopt : params);
  SubgaussianParams probe = params.value_or(dist.declared_params().value_or(SubgaussianParams(1.0, 1.0)));
  const std::string expect = get_or<std::string>(j, "expect", control ? "fail" : "pass");
  if (expect != "pass" && expect != "fail") fail(where + ": 'expect' must be \"pass\" or \"fail\"");
  return {checked_name(get_or<std::string>(j, "name", dist.family_name())), std::move(dist), probe, expect == "pass"};
}

json distribution_entry_to_json(const DistributionEntry& entry) {
  json j = distribution_to_json(entry.dist);
  j["name"] = entry.name;
  j.update(params_json(entry.params));
  j["expect"] = entry.expect_pass ? "pass" : "fail";
  return j;
}

}  // namespace

bool CampaignConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

CampaignConfig default_config() {
  CampaignConfig config;
  config.seed = 20240601;
  config.n_paths = 20000;
  config.horizons = {50, 200};
  config.deltas = {0.1, 0.01};
  config.generators = {
      {"iid_gaussian", GeneratorSpec::iid(DistributionSpec::gaussian(1.0))},
      {"scaled_gaussian", GeneratorSpec::scaled_gaussian(0.5, 1.0)},
      {"bounded_sign_flip", GeneratorSpec::sign_flip(1.0)},
  };
  config.distributions = {
      {"gaussian", DistributionSpec::gaussian(1.0), SubgaussianParams(1.0, 0.5), true},
      {"rademacher", DistributionSpec::rademacher(1.0), SubgaussianParams(std::numbers::e, 1.0), true},
      {"uniform", DistributionSpec::uniform(1.0), SubgaussianParams(std::numbers::e, 1.0), true},
      {"laplace", DistributionSpec::laplace(1.0), SubgaussianParams(1.0, 1.0), false},
  };
  return config;
}

nlohmann::json distribution_to_json(const DistributionSpec& dist) {
  return std::visit(Overloaded{
                        [](const CenteredGaussian& g) { return json{{"family", "gaussian"}, {"sigma", g.sigma}}; },
                        [](const UniformSymmetric& u) {
                          return json{{"family", "uniform"}, {"half_width", u.half_width}};
                        },
                        [](const Rademacher& r) { return json{{"family", "rademacher"}, {"magnitude", r.magnitude}}; },
                        [](const Laplace& l) { return json{{"family", "laplace"}, {"rate", l.rate}}; },
                    },
                    dist.family());
}

DistributionSpec distribution_from_json(const nlohmann::json& j, std::optional<SubgaussianParams> declared) {
  if (!j.is_object()) fail("distribution entries must be objects");
  const std::string family = get_or<std::string>(j, "family", "");
  const std::string where = "distribution '" + family + "'";
  if (family == "gaussian") {
    return declared ? DistributionSpec(CenteredGaussian{require_number(j, "sigma", where)}, declared)
                    : DistributionSpec::gaussian(require_number(j, "sigma", where));
  }
  if (family == "uniform") {
    return declared ? DistributionSpec(UniformSymmetric{require_number(j, "half_width", where)}, declared)
                    : DistributionSpec::uniform(require_number(j, "half_width", where));
  }
  if (family == "rademacher") {
    return declared ? DistributionSpec(Rademacher{require_number(j, "magnitude", where)}, declared)
                    : DistributionSpec::rademacher(require_number(j, "magnitude", where));
  }
  if (family == "laplace") return DistributionSpec(Laplace{require_number(j, "rate", where)}, declared);
  fail("unknown distribution family '" + family + "'");
}

CampaignConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) fail("config must be a JSON object");
  const json& j = doc.contains("config") && doc.contains("version") ? doc.at("config") : doc;
  if (!j.is_object()) fail("config must be a JSON object");

  CampaignConfig config = default_config();
  config.seed = get_or<std::uint64_t>(j, "seed", config.seed);
  config.n_paths = get_or<std::uint64_t>(j, "n_paths", config.n_paths);
  config.horizons = get_or<std::vector<std::uint64_t>>(j, "T", config.horizons);
  config.deltas = get_or<std::vector<double>>(j, "delta", config.deltas);
  config.max_draws = get_or<std::uint64_t>(j, "max_draws", config.max_draws);
  config.dump_path_means = get_or<bool>(j, "dump_path_means", config.dump_path_means);
  config.a_grid_points = get_or<std::size_t>(j, "a_grid_points", config.a_grid_points);
  config.series_grid_points = get_or<std::size_t>(j, "series_grid_points", config.series_grid_points);
  config.output_dir = get_or<std::string>(j, "output_dir", config.output_dir);
  config.formats = get_or<std::vector<std::string>>(j, "formats", config.formats);
  for (const auto& f : config.formats) {
    if (f != "csv" && f != "json") fail("unknown output format '" + f + "'");
  }
  if (j.contains("s_grid")) {
    const json& g = j.at("s_grid");
    config.s_grid_points = get_or<std::size_t>(g, "points", config.s_grid_points);
    config.s_grid_lo_factor = get_or<double>(g, "lo_factor", config.s_grid_lo_factor);
    config.s_grid_hi_factor = get_or<double>(g, "hi_factor", config.s_grid_hi_factor);
  }

  if (j.contains("generators")) {
    if (!j.at("generators").is_array()) fail("'generators' must be an array");
    config.generators.clear();
    for (const json& g : j.at("generators")) {
      const std::string name = get_or<std::string>(g, "name", "");
      const std::string where = "generator '" + name + "'";
      GeneratorSpec gen = generator_from_json(g, where);
      config.generators.push_back({checked_name(name.empty() ? gen.family_name() : name), std::move(gen)});
    }
  }
  if (j.contains("distributions")) {
    if (!j.at("distributions").is_array()) fail("'distributions' must be an array");
    config.distributions.clear();
    for (const json& d : j.at("distributions")) {
      config.distributions.push_back(distribution_entry_from_json(d, "distribution '" + get_or<std::string>(d, "name", "") + "'"));
    }
  }
  return config;
}

nlohmann::json to_json(const CampaignConfig& config) {
  json generators = json::array();
  for (const auto& g : config.generators) generators.push_back(generator_to_json(g));
  json distributions = json::array();
  for (const auto& d : config.distributions) distributions.push_back(distribution_entry_to_json(d));
  return {
      {"seed", config.seed},
      {"n_paths", config.n_paths},
      {"T", config.horizons},
      {"delta", config.deltas},
      {"max_draws", config.max_draws},
      {"dump_path_means", config.dump_path_means},
      {"generators", generators},
      {"distributions", distributions},
      {"s_grid",
       {{"points", config.s_grid_points}, {"lo_factor", config.s_grid_lo_factor}, {"hi_factor", config.s_grid_hi_factor}}},
      {"a_grid_points", config.a_grid_points},
      {"series_grid_points", config.series_grid_points},
      {"formats", config.formats},
  };
}

CampaignConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    fail("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(doc);
}

void validate_for_verify(const CampaignConfig& config) {
  if (config.distributions.empty()) fail("empty grid: no distributions configured");
  if (config.s_grid_points < 2 || config.a_grid_points < 2 || config.series_grid_points < 1) {
    fail("empty grid: s/a/series grids need at least 2, 2 and 1 points");
  }
  if (!(config.s_grid_lo_factor > 0.0 && config.s_grid_lo_factor < config.s_grid_hi_factor)) {
    fail("s_grid needs 0 < lo_factor < hi_factor");
  }
}

void validate_for_simulate(const CampaignConfig& config) {
  if (config.generators.empty()) fail("empty grid: no generators configured");
  if (config.horizons.empty()) fail("empty grid: no T values configured");
  if (config.deltas.empty()) fail("empty grid: no delta values configured");
  if (config.n_paths < 1) fail("n_paths must be >= 1");
  for (auto t : config.horizons) {
    if (t < 1) fail("every T must be >= 1");
  }
  for (double d : config.deltas) {
    if (!(d > 0.0 && d < 1.0)) fail("every delta must lie in (0, 1)");
  }
}

}  // namespace azuma::cli
