#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "azuma/verification_report.hpp"

namespace azuma::cli {

inline constexpr const char* kToolVersion = "azuma 1.0.0";

nlohmann::json to_json(const VerificationReport& report);

// Top-level document: version, config, bounds, verification, simulation.
nlohmann::json make_bundle(nlohmann::json config, nlohmann::json bounds, nlohmann::json verification,
                           nlohmann::json simulation);

// Two-space indented, trailing newline.
std::string render(const nlohmann::json& doc);

/// Writes `content` to `path` through a sibling temporary file and a rename,
/// so readers never observe a partial file. Creates parent directories.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace azuma::cli
