#include "ttsac/harness/config.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <set>
#include <utility>

#include "json.hpp"
#include "ttsac/core.hpp"

namespace ttsac::harness {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<std::string_view, Suite>, 6> kSuites{{
    {"covariance", Suite::Covariance},
    {"contraction", Suite::Contraction},
    {"bound", Suite::Bound},
    {"bias-variance", Suite::BiasVariance},
    {"k-sweep", Suite::KSweep},
    {"pipeline", Suite::Pipeline},
}};

constexpr std::array<std::pair<std::string_view, Family>, 3> kFamilies{{
    {"affine", Family::Affine},
    {"nonlinear", Family::Nonlinear},
    {"linear-pipeline", Family::LinearPipeline},
}};

constexpr std::array<std::pair<std::string_view, MatrixShape>, 3> kShapes{{
    {"identity", MatrixShape::ScaledIdentity},
    {"orthogonal", MatrixShape::Orthogonal},
    {"random", MatrixShape::Random},
}};

template <class Enum, std::size_t N>
Enum lookup(const std::array<std::pair<std::string_view, Enum>, N>& table, std::string_view name,
            std::string_view field) {
  for (const auto& [key, value] : table) {
    if (key == name) {
      return value;
    }
  }
  std::string legal;
  for (const auto& [key, value] : table) {
    legal += legal.empty() ? "" : ", ";
    legal += key;
  }
  throw UsageError(std::string(field) + ": unknown value '" + std::string(name) + "' (expected one of " + legal +
                   ")");
}

template <class Enum, std::size_t N>
std::string_view reverse_lookup(const std::array<std::pair<std::string_view, Enum>, N>& table, Enum value) {
  for (const auto& [key, v] : table) {
    if (v == value) {
      return key;
    }
  }
  return "unknown";
}

/// Values read from the config file, before defaults.
struct RawConfig {
  std::optional<std::string> suite;
  std::optional<std::size_t> d, K, kMax, T, M, passes, renderDim, motionDim;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output, format, plot, family, matrix;
  std::optional<double> scale, gain, rho, sigma2, drift, coupling, motionNoise, featureNorm;
  std::optional<std::vector<double>> direction;
};

void reject_unknown(const json& object, const std::set<std::string>& allowed, std::string_view where) {
  for (const auto& [key, value] : object.items()) {
    if (!allowed.contains(key)) {
      throw UsageError("config: unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <class T>
void read(const json& object, const char* key, std::optional<T>& out) {
  if (!object.contains(key)) {
    return;
  }
  const json& v = object.at(key);
  try {
    if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        throw UsageError(std::string("config: '") + key + "' must be a non-negative integer");
      }
      out = v.get<T>();
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) {
        throw UsageError(std::string("config: '") + key + "' must be a number");
      }
      out = v.get<double>();
    } else {
      out = v.get<T>();
    }
  } catch (const json::exception&) {
    throw UsageError(std::string("config: '") + key + "' has the wrong type");
  }
}

RawConfig read_document(std::string_view text) {
  RawConfig raw;
  bool blank = true;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      blank = false;
      break;
    }
  }
  if (blank) {
    return raw;
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config: malformed document: ") + e.what());
  }
  if (!doc.is_object()) {
    throw UsageError("config: top level must be an object");
  }
  reject_unknown(doc,
                 {"suite", "d", "K", "kMax", "T", "M", "passes", "seed", "output", "format", "plot", "system"},
                 "top level");
  read(doc, "suite", raw.suite);
  read(doc, "d", raw.d);
  read(doc, "K", raw.K);
  read(doc, "kMax", raw.kMax);
  read(doc, "T", raw.T);
  read(doc, "M", raw.M);
  read(doc, "passes", raw.passes);
  read(doc, "seed", raw.seed);
  read(doc, "output", raw.output);
  read(doc, "format", raw.format);
  read(doc, "plot", raw.plot);
  if (doc.contains("system")) {
    const json& sys = doc.at("system");
    if (!sys.is_object()) {
      throw UsageError("config: 'system' must be an object");
    }
    reject_unknown(sys,
                   {"family", "matrix", "scale", "gain", "rho", "sigma2", "drift", "direction", "p", "m", "coupling",
                    "motionNoise", "featureNorm"},
                   "system");
    read(sys, "family", raw.family);
    read(sys, "matrix", raw.matrix);
    read(sys, "scale", raw.scale);
    read(sys, "gain", raw.gain);
    read(sys, "rho", raw.rho);
    read(sys, "sigma2", raw.sigma2);
    read(sys, "drift", raw.drift);
    read(sys, "direction", raw.direction);
    read(sys, "p", raw.renderDim);
    read(sys, "m", raw.motionDim);
    read(sys, "coupling", raw.coupling);
    read(sys, "motionNoise", raw.motionNoise);
    read(sys, "featureNorm", raw.featureNorm);
  }
  return raw;
}

template <class T>
void override_with(std::optional<T>& target, const std::optional<T>& flag) {
  if (flag) {
    target = flag;
  }
}

void require_positive(std::size_t value, std::string_view field) {
  if (value == 0) {
    throw UsageError(std::string(field) + " must be a positive integer");
  }
}

void require_finite(double value, std::string_view field) {
  if (!std::isfinite(value)) {
    throw UsageError(std::string(field) + " must be finite");
  }
}

/// Per-suite defaults applied to values the user left unset.
void apply_suite_defaults(Suite suite, RawConfig& raw) {
  auto fallback = [](auto& field, auto value) {
    if (!field) {
      field = value;
    }
  };
  switch (suite) {
    case Suite::Covariance:
    case Suite::Contraction:
    case Suite::Bound:
      fallback(raw.family, std::string("affine"));
      break;
    case Suite::BiasVariance:
      fallback(raw.family, std::string("linear-pipeline"));
      fallback(raw.drift, 0.1);
      break;
    case Suite::KSweep:
      fallback(raw.family, std::string("linear-pipeline"));
      fallback(raw.drift, 0.1);
      // Independent frames make the variance term exactly σ²/K.
      fallback(raw.rho, 0.0);
      break;
    case Suite::Pipeline:
      fallback(raw.family, std::string("linear-pipeline"));
      fallback(raw.drift, 0.1);
      fallback(raw.M, std::size_t{50});
      break;
  }
  if (suite == Suite::Contraction) {
    fallback(raw.passes, std::size_t{6});
  }
  if (suite == Suite::Bound) {
    fallback(raw.matrix, std::string("random"));
  }
}

}  // namespace

Suite parse_suite(std::string_view name) { return lookup(kSuites, name, "suite"); }
std::string_view to_string(Suite suite) { return reverse_lookup(kSuites, suite); }
Family parse_family(std::string_view name) { return lookup(kFamilies, name, "system.family"); }
std::string_view to_string(Family family) { return reverse_lookup(kFamilies, family); }
MatrixShape parse_matrix_shape(std::string_view name) { return lookup(kShapes, name, "system.matrix"); }
std::string_view to_string(MatrixShape shape) { return reverse_lookup(kShapes, shape); }

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") {
    return OutputFormat::Csv;
  }
  if (name == "json") {
    return OutputFormat::Json;
  }
  throw UsageError("format: unknown value '" + std::string(name) + "' (expected csv or json)");
}

ExperimentConfig parse_config(std::string_view text, const ConfigOverrides& overrides) {
  RawConfig raw = read_document(text);
  override_with(raw.suite, overrides.suite);
  override_with(raw.seed, overrides.seed);
  override_with(raw.output, overrides.output);
  override_with(raw.format, overrides.format);
  override_with(raw.K, overrides.K);
  override_with(raw.kMax, overrides.kMax);
  override_with(raw.M, overrides.trials);
  override_with(raw.d, overrides.dim);
  override_with(raw.rho, overrides.rho);
  override_with(raw.sigma2, overrides.sigma2);
  override_with(raw.drift, overrides.drift);
  override_with(raw.passes, overrides.passes);
  override_with(raw.plot, overrides.plot);
  override_with(raw.family, overrides.family);

  if (!raw.suite) {
    throw UsageError("suite: required field is missing");
  }
  ExperimentConfig cfg;
  cfg.suite = parse_suite(*raw.suite);
  apply_suite_defaults(cfg.suite, raw);

  cfg.d = raw.d.value_or(cfg.d);
  cfg.kExplicit = raw.K.has_value();
  cfg.K = raw.K.value_or(cfg.K);
  cfg.kMax = raw.kMax.value_or(cfg.kMax);
  cfg.T = raw.T.value_or(cfg.T);
  cfg.M = raw.M.value_or(cfg.M);
  cfg.passes = raw.passes.value_or(cfg.passes);
  cfg.seed = raw.seed.value_or(cfg.seed);
  cfg.output = raw.output;
  cfg.plot = raw.plot;
  if (raw.format) {
    cfg.format = parse_format(*raw.format);
  }

  SystemSpec& sys = cfg.system;
  sys.family = parse_family(raw.family.value_or("affine"));
  if (raw.matrix) {
    sys.matrix = parse_matrix_shape(*raw.matrix);
  }
  sys.scale = raw.scale.value_or(sys.scale);
  sys.gain = raw.gain.value_or(sys.gain);
  sys.rho = raw.rho.value_or(sys.rho);
  sys.sigma2 = raw.sigma2.value_or(sys.sigma2);
  sys.drift = raw.drift.value_or(sys.drift);
  sys.direction = raw.direction.value_or(std::vector<double>{});
  sys.renderDim = raw.renderDim.value_or(2 * cfg.d);
  sys.motionDim = raw.motionDim.value_or(sys.motionDim);
  sys.coupling = raw.coupling.value_or(sys.coupling);
  sys.motionNoise = raw.motionNoise.value_or(sys.motionNoise);
  sys.featureNorm = raw.featureNorm.value_or(sys.featureNorm);

  require_positive(cfg.d, "d");
  if (cfg.d > kMaxDimension) {
    throw UsageError("d must not exceed " + std::to_string(kMaxDimension) + ", got " + std::to_string(cfg.d));
  }
  require_positive(cfg.K, "K");
  require_positive(cfg.kMax, "kMax");
  require_positive(cfg.T, "T");
  require_positive(cfg.M, "M");
  require_positive(cfg.passes, "passes");
  require_positive(sys.motionDim, "system.m");
  for (auto [value, field] : {std::pair{sys.scale, "system.scale"}, {sys.gain, "system.gain"},
                              {sys.rho, "system.rho"}, {sys.sigma2, "system.sigma2"}, {sys.drift, "system.drift"},
                              {sys.coupling, "system.coupling"}, {sys.motionNoise, "system.motionNoise"},
                              {sys.featureNorm, "system.featureNorm"}}) {
    require_finite(value, field);
  }
  if (!(sys.rho >= 0.0 && sys.rho < 1.0)) {
    throw UsageError("rho must lie in [0, 1), got " + std::to_string(sys.rho));
  }
  if (sys.sigma2 < 0.0) {
    throw UsageError("sigma2 must be non-negative, got " + std::to_string(sys.sigma2));
  }
  if (sys.scale < 0.0) {
    throw UsageError("system.scale must be non-negative");
  }
  if (sys.motionNoise < 0.0) {
    throw UsageError("system.motionNoise must be non-negative");
  }
  if (!(sys.featureNorm > 0.0)) {
    throw UsageError("system.featureNorm must be positive");
  }
  if (sys.renderDim < cfg.d || sys.renderDim > 4 * kMaxDimension) {
    throw UsageError("system.p must satisfy d ≤ p ≤ " + std::to_string(4 * kMaxDimension));
  }
  if (sys.family == Family::Nonlinear) {
    if (!(sys.gain > 0.0 && sys.gain < 1.0)) {
      throw UsageError("system.gain must lie in (0, 1) for the nonlinear family");
    }
    if (sys.scale > 1.0) {
      throw UsageError("system.scale (‖W‖₂) must not exceed 1 for the nonlinear family");
    }
    if (sys.drift != 0.0) {
      throw UsageError("system.drift must be 0 for the nonlinear family");
    }
  }
  if (!sys.direction.empty()) {
    const std::size_t want = sys.family == Family::LinearPipeline ? sys.motionDim : cfg.d;
    if (sys.direction.size() != want) {
      throw UsageError("system.direction must have " + std::to_string(want) + " entries");
    }
  }
  if (cfg.suite == Suite::Pipeline && cfg.T < cfg.K) {
    throw UsageError("T must be at least K for the pipeline suite");
  }
  if (cfg.suite == Suite::Covariance && cfg.M < 2) {
    throw UsageError("M must be at least 2 for the covariance suite");
  }
  if (cfg.suite == Suite::Contraction && sys.family == Family::LinearPipeline) {
    throw UsageError("the contraction suite needs a contractive family (affine or nonlinear)");
  }
  if ((cfg.suite == Suite::BiasVariance || cfg.suite == Suite::KSweep) && sys.family == Family::Nonlinear) {
    throw UsageError("the bias-variance and k-sweep suites need a constant-Jacobian family");
  }
  return cfg;
}

}  // namespace ttsac::harness
