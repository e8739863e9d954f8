#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "azuma/cli/config.hpp"

namespace azuma::cli {

// A bad command-line value; `flag` is the option to blame, e.g. "--delta".
class FlagError : public std::invalid_argument {
 public:
  FlagError(std::string flag, const std::string& message)
      : std::invalid_argument(flag + ": " + message), flag_(std::move(flag)) {}
  const std::string& flag() const noexcept { return flag_; }

 private:
  std::string flag_;
};

struct BoundsRequest {
  std::optional<double> b;
  std::optional<double> c;
  std::optional<std::int64_t> horizon;
  std::optional<double> delta;
  std::optional<double> epsilon;
  std::optional<double> bound_B;
};

// Ordered (name, value) rows. Throws FlagError on invalid input.
using Table = std::vector<std::pair<std::string, std::string>>;
Table compute_bounds(const BoundsRequest& request);
void print_table(const Table& table, std::ostream& out);

struct SectionResult {
  nlohmann::json entries = nlohmann::json::array();
  bool ok = true;
  std::string first_failure;
};

// epsilon_theorem / epsilon_classic per (generator, T, delta).
nlohmann::json bounds_section(const CampaignConfig& config);

// One entry per configured distribution. ok iff every entry behaves as its
// `expect` says (expected-pass entries pass everything, controls fail).
SectionResult run_verify(const CampaignConfig& config);

struct SimulationResult : SectionResult {
  std::string csv;
  // (file name, contents) of per-cell path-mean dumps.
  std::vector<std::pair<std::string, std::string>> dumps;
};

inline constexpr const char* kCsvHeader =
    "generator,T,delta,b,c,epsilon_theorem,epsilon_classic,upper_violations,lower_violations,n_paths,"
    "empirical_quantile,tightness_ratio,seed";

/// Runs every (generator, T, delta) cell in that nesting order. Cell k uses
/// seed path_seed(config.seed, k). Output does not depend on `jobs`.
SimulationResult run_simulate(const CampaignConfig& config, unsigned jobs);

struct TightenRow {
  std::string name;
  std::string family;
  double b = 0.0;
  double c = 0.0;
  std::optional<double> k;  // empty when the entry was not eligible
  std::string status;
};
std::vector<TightenRow> run_tighten(const CampaignConfig& config);
void print_tighten(const std::vector<TightenRow>& rows, std::ostream& out);
// Every expected-pass row produced a K <= 7.
bool tighten_ok(const std::vector<TightenRow>& rows, const CampaignConfig& config);

}  // namespace azuma::cli
