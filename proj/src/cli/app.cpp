#include "azuma/cli/app.hpp"

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "azuma/cli/commands.hpp"
#include "azuma/cli/config.hpp"
#include "azuma/cli/report_json.hpp"
#include "azuma/errors.hpp"
#include "azuma/number_format.hpp"

namespace azuma::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kPrecedence =
    "Settings precedence: command-line flags > AZUMA_OUT_DIR (output directory only) > --config file > built-in "
    "defaults. A report written by this tool is itself a valid --config.";

struct ConfigFlags {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string format;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::int64_t> horizons;
  std::vector<double> deltas;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* horizons_opt = nullptr;
  CLI::Option* deltas_opt = nullptr;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config (or a previous report)")->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out_dir, "output directory");
  f.seed_opt = cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--format", f.format, "write only this format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--jobs", f.jobs, "worker threads; results do not depend on it")->capture_default_str();
  f.horizons_opt = cmd->add_option("--T", f.horizons, "horizon grid (repeatable)");
  f.deltas_opt = cmd->add_option("--delta", f.deltas, "confidence grid (repeatable)");
}

CampaignConfig resolve(const ConfigFlags& f) {
  CampaignConfig config = f.config_path.empty() ? default_config() : load_config(f.config_path);
  if (f.seed_opt->count() > 0) config.seed = f.seed;
  if (f.horizons_opt->count() > 0) {
    config.horizons.clear();
    for (auto t : f.horizons) {
      if (t < 1) throw FlagError("--T", "must be >= 1, got " + std::to_string(t));
      config.horizons.push_back(static_cast<std::uint64_t>(t));
    }
  }
  if (f.deltas_opt->count() > 0) {
    for (double d : f.deltas) {
      if (!(d > 0.0 && d < 1.0)) throw FlagError("--delta", "must lie in (0, 1), got " + shortest(d));
    }
    config.deltas = f.deltas;
  }
  if (!f.format.empty()) config.formats = {f.format};
  if (!f.out_dir.empty()) {
    config.output_dir = f.out_dir;
  } else if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
    config.output_dir = env;
  }
  if (f.jobs < 1) throw FlagError("--jobs", "must be >= 1");
  return config;
}

void emit(const fs::path& path, const std::string& content, std::ostream& out) {
  write_atomic(path, content);
  out << "wrote " << path.string() << '\n';
}

void print_verify(const SectionResult& r, std::ostream& out) {
  for (const auto& e : r.entries) {
    out << e["name"].get<std::string>() << ": " << e["outcome"].get<std::string>() << " (expected "
        << e["expect"].get<std::string>() << ")\n";
  }
}

void print_simulate(const SimulationResult& r, std::ostream& out) {
  for (const auto& e : r.entries) {
    out << e["generator"].get<std::string>() << " T=" << e["T"].get<std::uint64_t>()
        << " delta=" << e["delta"].get<double>() << ": upper " << e["upper_violations"].get<std::uint64_t>()
        << ", lower " << e["lower_violations"].get<std::uint64_t>() << " of " << e["n_paths"].get<std::uint64_t>()
        << (e["pass"].get<bool>() ? " pass" : " FAIL") << '\n';
  }
}

int finish(bool ok, const std::string& command, const std::string& failure, std::ostream& err) {
  if (ok) return kExitOk;
  err << command << ": " << failure << '\n';
  return kExitCheckFailed;
}

int cmd_verify(const CampaignConfig& config, std::ostream& out, std::ostream& err) {
  if (!config.wants("json")) throw FlagError("--format", "verify writes JSON reports only");
  const SectionResult r = run_verify(config);
  print_verify(r, out);
  const json doc = make_bundle(to_json(config), bounds_section(config), r.entries, json::array());
  emit(fs::path(config.output_dir) / "verify.json", render(doc), out);
  return finish(r.ok, "verify", r.first_failure, err);
}

void emit_simulation(const CampaignConfig& config, const SimulationResult& r, std::ostream& out) {
  const fs::path dir(config.output_dir);
  if (config.wants("csv")) emit(dir / "simulation.csv", r.csv, out);
  for (const auto& [name, content] : r.dumps) emit(dir / name, content, out);
}

int cmd_simulate(const CampaignConfig& config, unsigned jobs, std::ostream& out, std::ostream& err) {
  const SimulationResult r = run_simulate(config, jobs);
  print_simulate(r, out);
  emit_simulation(config, r, out);
  if (config.wants("json")) {
    const json doc = make_bundle(to_json(config), bounds_section(config), json::array(), r.entries);
    emit(fs::path(config.output_dir) / "simulate.json", render(doc), out);
  }
  return finish(r.ok, "simulate", r.first_failure, err);
}

int cmd_tighten(const CampaignConfig& config, std::ostream& out, std::ostream& err) {
  const auto rows = run_tighten(config);
  print_tighten(rows, out);
  return finish(tighten_ok(rows, config), "tighten", "an expected-pass distribution has no K <= 7", err);
}

int cmd_campaign(const CampaignConfig& config, unsigned jobs, std::ostream& out, std::ostream& err) {
  const SectionResult v = run_verify(config);
  print_verify(v, out);
  const SimulationResult s = run_simulate(config, jobs);
  print_simulate(s, out);
  const auto rows = run_tighten(config);
  print_tighten(rows, out);

  emit_simulation(config, s, out);
  if (config.wants("json")) {
    const json doc = make_bundle(to_json(config), bounds_section(config), v.entries, s.entries);
    emit(fs::path(config.output_dir) / "campaign.json", render(doc), out);
  }
  if (!v.ok) return finish(false, "campaign: verify", v.first_failure, err);
  if (!s.ok) return finish(false, "campaign: simulate", s.first_failure, err);
  return finish(tighten_ok(rows, config), "campaign: tighten", "an expected-pass distribution has no K <= 7", err);
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Subgaussian Azuma bounds, MGF envelope certification and martingale simulation.", "azuma"};
  app.footer(kPrecedence);
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  BoundsRequest br;
  double b = 0, c = 0, delta = 0, epsilon = 0, bound = 0;
  std::int64_t horizon = 0;
  auto* bounds = app.add_subcommand("bounds", "deviation bound for given (b, c) and two of T, delta, epsilon");
  auto* b_opt = bounds->add_option("--b", b, "tail envelope scale b >= 1");
  auto* c_opt = bounds->add_option("--c", c, "tail envelope decay c > 0");
  auto* t_opt = bounds->add_option("--T", horizon, "horizon");
  auto* d_opt = bounds->add_option("--delta", delta, "confidence in (0, 1)");
  auto* e_opt = bounds->add_option("--epsilon", epsilon, "deviation threshold");
  auto* bb_opt = bounds->add_option("--bound-B", bound, "hard bound |Z| <= B; adds the classic Azuma epsilon");

  ConfigFlags vf, sf, tf, cf;
  auto* verify = app.add_subcommand("verify", "certify the MGF envelope for each configured distribution");
  add_config_flags(verify, vf);
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo validation of the deviation bound");
  add_config_flags(simulate, sf);
  auto* tighten = app.add_subcommand("tighten", "smallest constant replacing 7 on the s grid");
  add_config_flags(tighten, tf);
  auto* campaign = app.add_subcommand("campaign", "verify, simulate and tighten in one run");
  add_config_flags(campaign, cf);
  for (auto* sub : {bounds, verify, simulate, tighten, campaign}) sub->footer(kPrecedence);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (bounds->parsed()) {
      if (b_opt->count()) br.b = b;
      if (c_opt->count()) br.c = c;
      if (t_opt->count()) br.horizon = horizon;
      if (d_opt->count()) br.delta = delta;
      if (e_opt->count()) br.epsilon = epsilon;
      if (bb_opt->count()) br.bound_B = bound;
      print_table(compute_bounds(br), out);
      return kExitOk;
    }
    if (verify->parsed()) return cmd_verify(resolve(vf), out, err);
    if (simulate->parsed()) return cmd_simulate(resolve(sf), sf.jobs, out, err);
    if (tighten->parsed()) return cmd_tighten(resolve(tf), out, err);
    return cmd_campaign(resolve(cf), cf.jobs, out, err);
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace azuma::cli
