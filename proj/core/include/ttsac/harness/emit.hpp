#pragma once

#include <ostream>
#include <span>
#include <stdexcept>
#include <string>

#include "ttsac/harness/config.hpp"
#include "ttsac/harness/record.hpp"

namespace ttsac::harness {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip text for a value; booleans print as true/false.
[[nodiscard]] std::string format_value(const Value& value);

/// Header row, then one line per record. Columns: suite, seed, the union
/// of parameter keys A-Z, then the union of result keys A-Z. Missing cells
/// are empty. Every line ends with '\n'.
void write_csv(std::span<const ExperimentRecord> records, std::ostream& out);

/// JSON array of flat objects with the same key order as the CSV columns.
void write_json(std::span<const ExperimentRecord> records, std::ostream& out);

/// SVG 1.1 line chart on an 800×600 viewport, one polyline per series.
void write_svg(const Plot& plot, std::ostream& out);

/// Write records to `path` in `format`. Throws IoError when the file
/// cannot be written and std::invalid_argument on an empty record list.
void emit(std::span<const ExperimentRecord> records, OutputFormat format, const std::string& path);

void emit_plot(const Plot& plot, const std::string& path);

}  // namespace ttsac::harness
