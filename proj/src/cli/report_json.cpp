#include "azuma/cli/report_json.hpp"

#include <fstream>

#include "azuma/errors.hpp"

namespace azuma::cli {

nlohmann::json to_json(const VerificationReport& report) {
  return {
      {"check", report.check},
      {"pass", report.pass},
      {"worst_margin", report.worst_margin},
      {"direction", to_string(report.direction)},
      {"threshold", report.threshold},
      {"worst_point", report.worst_point},
      {"grid", report.grid},
      {"details", report.details},
      {"notes", report.notes},
  };
}

nlohmann::json make_bundle(nlohmann::json config, nlohmann::json bounds, nlohmann::json verification,
                           nlohmann::json simulation) {
  return {
      {"version", kToolVersion},
      {"config", std::move(config)},
      {"bounds", std::move(bounds)},
      {"verification", std::move(verification)},
      {"simulation", std::move(simulation)},
  };
}

std::string render(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw ResourceError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw ResourceError("write to " + tmp.string() + " failed");
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw ResourceError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace azuma::cli
