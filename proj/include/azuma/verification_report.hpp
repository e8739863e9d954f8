#pragma once

#include <map>
#include <string>
#include <vector>

namespace azuma {

// Which side of the threshold counts as satisfied.
enum class Direction { kAtMost, kAtLeast };

/// Outcome of certifying one inequality over a grid.
///
/// `pass` is derived from `worst_margin`, `direction` and `threshold` and is
/// never set independently; use make_report().
struct VerificationReport {
  std::string check;
  bool pass = false;
  double worst_margin = 0.0;
  Direction direction = Direction::kAtMost;
  double threshold = 0.0;
  std::map<std::string, double> worst_point;
  std::string grid;
  std::map<std::string, double> details;
  std::vector<std::string> notes;
};

bool satisfies(Direction direction, double margin, double threshold);

VerificationReport make_report(std::string check, double worst_margin, Direction direction,
                               double threshold, std::map<std::string, double> worst_point,
                               std::string grid);

const char* to_string(Direction direction);

/// Collapses per-point reports of one check into a single report carrying
/// the most adverse margin; passes only if every point passes. `reports`
/// must be non-empty and share direction and threshold.
VerificationReport worst_report(const std::vector<VerificationReport>& reports, std::string grid);

}  // namespace azuma
