#include "ttsac/harness/emit.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace ttsac::harness {

namespace {

struct Columns {
  std::vector<std::string> params;
  std::vector<std::string> results;
};

Columns collect_columns(std::span<const ExperimentRecord> records) {
  std::set<std::string> params;
  std::set<std::string> results;
  for (const auto& r : records) {
    for (const auto& [k, v] : r.params) {
      params.insert(k);
    }
    for (const auto& [k, v] : r.results) {
      results.insert(k);
    }
  }
  return {{params.begin(), params.end()}, {results.begin(), results.end()}};
}

std::string format_double(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), end};
}

std::string csv_cell(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) {
    return text;
  }
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') {
      quoted += '"';
    }
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

nlohmann::ordered_json to_json(const Value& value) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) {
            return format_double(v);
          }
        }
        return v;
      },
      value);
}

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 180.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;
constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string tick(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  file << content;
  if (!file.flush()) {
    throw IoError("failed writing '" + path + "'");
  }
}

}  // namespace

std::string format_value(const Value& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else {
          return v;
        }
      },
      value);
}

void write_csv(std::span<const ExperimentRecord> records, std::ostream& out) {
  const Columns cols = collect_columns(records);
  out << "suite,seed";
  for (const auto& k : cols.params) {
    out << ',' << csv_cell(k);
  }
  for (const auto& k : cols.results) {
    out << ',' << csv_cell(k);
  }
  out << '\n';
  for (const auto& r : records) {
    out << csv_cell(r.suite) << ',' << r.seed;
    for (const auto& k : cols.params) {
      out << ',';
      if (auto it = r.params.find(k); it != r.params.end()) {
        out << csv_cell(format_value(it->second));
      }
    }
    for (const auto& k : cols.results) {
      out << ',';
      if (auto it = r.results.find(k); it != r.results.end()) {
        out << csv_cell(format_value(it->second));
      }
    }
    out << '\n';
  }
}

void write_json(std::span<const ExperimentRecord> records, std::ostream& out) {
  const Columns cols = collect_columns(records);
  auto array = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json obj;
    obj["suite"] = r.suite;
    obj["seed"] = r.seed;
    for (const auto& k : cols.params) {
      if (auto it = r.params.find(k); it != r.params.end()) {
        obj[k] = to_json(it->second);
      }
    }
    for (const auto& k : cols.results) {
      if (auto it = r.results.find(k); it != r.results.end()) {
        obj[k] = to_json(it->second);
      }
    }
    array.push_back(std::move(obj));
  }
  out << array.dump(2) << '\n';
}

void write_svg(const Plot& plot, std::ostream& out) {
  double xMin = std::numeric_limits<double>::infinity();
  double xMax = -xMin;
  double yMin = xMin;
  double yMax = -xMin;
  for (const auto& s : plot.series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        continue;
      }
      xMin = std::min(xMin, s.x[i]);
      xMax = std::max(xMax, s.x[i]);
      yMin = std::min(yMin, s.y[i]);
      yMax = std::max(yMax, s.y[i]);
    }
  }
  if (!std::isfinite(xMin)) {
    xMin = 0.0, xMax = 1.0, yMin = 0.0, yMax = 1.0;
  }
  if (xMax == xMin) {
    xMax = xMin + 1.0;
  }
  if (yMax == yMin) {
    yMax = yMin + 1.0;
  }
  const double plotW = kWidth - kLeft - kRight;
  const double plotH = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xMin) / (xMax - xMin) * plotW; };
  auto py = [&](double y) { return kTop + plotH - (y - yMin) / (yMax - yMin) * plotH; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n"
      << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n"
      << "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">"
      << xml_escape(plot.title) << "</text>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plotH << "\" x2=\"" << kLeft + plotW << "\" y2=\""
      << kTop + plotH << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + plotH
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = xMin + (xMax - xMin) * i / 4.0;
    const double fy = yMin + (yMax - yMin) * i / 4.0;
    out << "<text x=\"" << px(fx) << "\" y=\"" << kTop + plotH + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << tick(fx) << "</text>\n"
        << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(fy) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << tick(fy) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + plotW / 2 << "\" y=\"" << kHeight - 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(plot.xLabel)
      << "</text>\n"
      << "<text x=\"18\" y=\"" << kTop + plotH / 2 << "\" transform=\"rotate(-90 18 " << kTop + plotH / 2
      << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(plot.yLabel)
      << "</text>\n";

  for (std::size_t s = 0; s < plot.series.size(); ++s) {
    const auto& series = plot.series[s];
    const char* colour = kPalette[s % kPalette.size()];
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < std::min(series.x.size(), series.y.size()); ++i) {
      if (!std::isfinite(series.x[i]) || !std::isfinite(series.y[i])) {
        continue;
      }
      out << (first ? "" : " ") << px(series.x[i]) << ',' << py(series.y[i]);
      first = false;
    }
    out << "\"/>\n";
    const double ly = kTop + 10 + 20.0 * static_cast<double>(s);
    const double lx = kLeft + plotW + 15;
    out << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 20 << "\" y2=\"" << ly << "\" stroke=\""
        << colour << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << lx + 26 << "\" y=\"" << ly + 4 << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << xml_escape(series.name) << "</text>\n";
  }
  out << "</svg>\n";
}

void emit(std::span<const ExperimentRecord> records, OutputFormat format, const std::string& path) {
  if (records.empty()) {
    throw std::invalid_argument("no records to emit");
  }
  std::ostringstream os;
  if (format == OutputFormat::Json) {
    write_json(records, os);
  } else {
    write_csv(records, os);
  }
  write_file(path, os.str());
}

void emit_plot(const Plot& plot, const std::string& path) {
  std::ostringstream os;
  write_svg(plot, os);
  write_file(path, os.str());
}

}  // namespace ttsac::harness
