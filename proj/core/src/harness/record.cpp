#include "ttsac/harness/record.hpp"

#include <algorithm>

namespace ttsac::harness {

ExperimentRecord& ExperimentRecord::param(const std::string& key, Value value) {
  params.insert_or_assign(key, std::move(value));
  return *this;
}

ExperimentRecord& ExperimentRecord::result(const std::string& key, Value value) {
  results.insert_or_assign(key, std::move(value));
  return *this;
}

bool ExperimentRecord::passed() const {
  return std::ranges::all_of(results, [](const auto& entry) {
    const auto& [key, value] = entry;
    const bool* flag = std::get_if<bool>(&value);
    return !key.starts_with("pass") || flag == nullptr || *flag;
  });
}

bool SuiteResult::all_passed() const {
  return std::ranges::all_of(records, [](const ExperimentRecord& r) { return r.passed(); });
}

}  // namespace ttsac::harness
