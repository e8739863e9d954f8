#include "azuma/verification_report.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace azuma {

bool satisfies(Direction direction, double margin, double threshold) {
  if (std::isnan(margin)) return false;
  return direction == Direction::kAtMost ? margin <= threshold : margin >= threshold;
}

VerificationReport make_report(std::string check, double worst_margin, Direction direction,
                               double threshold, std::map<std::string, double> worst_point,
                               std::string grid) {
  VerificationReport report;
  report.check = std::move(check);
  report.worst_margin = worst_margin;
  report.direction = direction;
  report.threshold = threshold;
  report.pass = satisfies(direction, worst_margin, threshold);
  report.worst_point = std::move(worst_point);
  report.grid = std::move(grid);
  return report;
}

const char* to_string(Direction direction) {
  return direction == Direction::kAtMost ? "at_most" : "at_least";
}

VerificationReport worst_report(const std::vector<VerificationReport>& reports, std::string grid) {
  if (reports.empty()) throw std::invalid_argument("worst_report: no reports");
  const VerificationReport* worst = &reports.front();
  bool all_pass = true;
  double failures = 0.0;
  for (const auto& r : reports) {
    if (!r.pass) {
      all_pass = false;
      failures += 1.0;
    }
    // NaN margins count as the worst possible.
    const bool adverse = std::isnan(r.worst_margin) ||
                         (r.direction == Direction::kAtMost ? r.worst_margin > worst->worst_margin
                                                            : r.worst_margin < worst->worst_margin);
    if (adverse && !std::isnan(worst->worst_margin)) worst = &r;
  }
  VerificationReport out = *worst;
  out.pass = all_pass;
  out.grid = std::move(grid);
  out.details["grid_points"] = static_cast<double>(reports.size());
  out.details["failing_points"] = failures;
  return out;
}

}  // namespace azuma
