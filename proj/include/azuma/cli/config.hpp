#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "azuma/core_bounds.hpp"
#include "azuma/distributions.hpp"
#include "azuma/martingale_sim.hpp"

namespace azuma::cli {

/// A distribution under test. For the positive families `params` are the
/// declared envelope; for the Laplace control they are the probe pair the
/// envelope check is expected to reject.
struct DistributionEntry {
  std::string name;
  DistributionSpec dist;
  SubgaussianParams params;
  bool expect_pass = true;
};

struct GeneratorEntry {
  std::string name;
  GeneratorSpec gen;
};

struct CampaignConfig {
  std::uint64_t seed = 0;
  std::uint64_t n_paths = 0;
  std::vector<std::uint64_t> horizons;
  std::vector<double> deltas;
  std::uint64_t max_draws = 1'000'000'000;
  bool dump_path_means = false;
  std::vector<GeneratorEntry> generators;
  std::vector<DistributionEntry> distributions;
  std::size_t s_grid_points = 400;
  double s_grid_lo_factor = 1e-3;
  double s_grid_hi_factor = 10.0;
  std::size_t a_grid_points = 400;
  std::size_t series_grid_points = 50;
  std::string output_dir = "azuma_out";
  std::vector<std::string> formats{"csv", "json"};

  bool wants(const std::string& format) const;
};

// 3 generators x T {50, 200} x delta {0.1, 0.01}, n = 2e4; the three
// positive families plus the Laplace control.
CampaignConfig default_config();

/// Missing keys fall back to default_config(). A full report document is
/// accepted too: its "config" member is used. Throws std::invalid_argument
/// with a one-line message on malformed input.
CampaignConfig config_from_json(const nlohmann::json& doc);
// Omits output_dir: where a report is written does not change its content.
nlohmann::json to_json(const CampaignConfig& config);

CampaignConfig load_config(const std::filesystem::path& path);

// Section checks; throw std::invalid_argument ("empty grid: ...").
void validate_for_verify(const CampaignConfig& config);
void validate_for_simulate(const CampaignConfig& config);

nlohmann::json distribution_to_json(const DistributionSpec& dist);
DistributionSpec distribution_from_json(const nlohmann::json& j, std::optional<SubgaussianParams> declared);

}  // namespace azuma::cli
