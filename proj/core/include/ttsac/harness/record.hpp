#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ttsac::harness {

using Value = std::variant<bool, std::int64_t, double, std::string>;

/// Marker stored in place of an analytic reference when none exists.
inline const std::string kEmpiricalOnly = "empirical-only";

/// One result row. Parameters and results are kept apart so emitters can
/// order columns as: suite, seed, parameters A-Z, results A-Z.
struct ExperimentRecord {
  std::string suite;
  std::uint64_t seed = 0;
  std::map<std::string, Value> params;
  std::map<std::string, Value> results;

  ExperimentRecord& param(const std::string& key, Value value);
  ExperimentRecord& result(const std::string& key, Value value);

  /// True when every boolean result whose key starts with "pass" is true.
  [[nodiscard]] bool passed() const;
};

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct Plot {
  std::string title;
  std::string xLabel;
  std::string yLabel;
  std::vector<Series> series;
};

struct SuiteResult {
  std::vector<ExperimentRecord> records;
  std::optional<Plot> plot;

  [[nodiscard]] bool all_passed() const;
};

}  // namespace ttsac::harness
