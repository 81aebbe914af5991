#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fracgrad/sweep_table.hpp"

namespace fracgrad::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  /// Binding measurement and its bound (the worst sub-check relative to its own bound).
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  double seconds = 0.0;
  double time_limit = 0.0;
  std::string detail;
};

struct Options {
  std::uint64_t seed = 20240611;
  /// Criteria to run (1..16); empty means all.
  std::vector<int> only;
  /// Called after each criterion finishes.
  std::function<void(const CriterionResult&)> on_result;
};

inline constexpr int kCriterionCount = 16;

std::vector<CriterionResult> run(const Options& options);

/// Columns criterion, name, value, threshold, pass. Timings are left out so
/// two runs with the same seed give identical bytes.
SweepTable results_table(const std::vector<CriterionResult>& results);

/// "PASS  4 localization ..." summary line.
std::string format_line(const CriterionResult& r);

}  // namespace fracgrad::acceptance
