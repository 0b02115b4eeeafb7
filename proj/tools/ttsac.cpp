// Command-line front end for the verification suites.
//
//   ttsac <suite> [--config PATH] [--seed N] [--out PATH] [--format csv|json]
//         [--k N | --k-max N] [--trials M] [--dim D] [--rho R] [--sigma2 S]
//         [--drift B] [--passes P] [--plot PATH.svg]
//
// Exit status: 0 when every check passes, 1 on usage or I/O errors,
// 2 when a numerical check fails.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ttsac/core.hpp"
#include "ttsac/harness/config.hpp"
#include "ttsac/harness/emit.hpp"
#include "ttsac/harness/suites.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ttsac::harness::IoError("cannot read config '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
void take(std::optional<T>& dst, const CLI::Option* opt, const T& value) {
  if (opt->count() > 0) {
    dst = value;
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ttsac::harness;

  CLI::App app{"Seeded verification suites for test-time self-adaptive conditioning"};
  app.set_version_flag("--version", "ttsac 0.1.0");

  std::string suite;
  std::string configPath;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
  std::size_t k = 0;
  std::size_t kMax = 0;
  std::size_t trials = 0;
  std::size_t dim = 0;
  double rho = 0.0;
  double sigma2 = 0.0;
  double drift = 0.0;
  std::size_t passes = 0;
  std::string plot;

  app.add_option("suite", suite, "covariance | contraction | bound | bias-variance | k-sweep | pipeline")
      ->required();
  app.add_option("--config", configPath, "JSON config file");
  auto* seedOpt = app.add_option("--seed", seed, "Master seed");
  auto* outOpt = app.add_option("--out", out, "Output path (default: stdout)");
  auto* formatOpt = app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  auto* kOpt = app.add_option("--k", k, "Frames aggregated per estimate")->check(CLI::PositiveNumber);
  auto* kMaxOpt = app.add_option("--k-max", kMax, "Largest K in the sweep")->check(CLI::PositiveNumber);
  kOpt->excludes(kMaxOpt);
  auto* trialsOpt = app.add_option("--trials", trials, "Monte Carlo trials M")->check(CLI::PositiveNumber);
  auto* dimOpt = app.add_option("--dim", dim, "Feature dimension d")->check(CLI::PositiveNumber);
  auto* rhoOpt = app.add_option("--rho", rho, "AR(1) coefficient in [0, 1)");
  auto* sigmaOpt = app.add_option("--sigma2", sigma2, "Per-frame noise trace");
  auto* driftOpt = app.add_option("--drift", drift, "Drift rate per frame");
  auto* passesOpt = app.add_option("--passes", passes, "Refinement passes")->check(CLI::PositiveNumber);
  auto* plotOpt = app.add_option("--plot", plot, "Write an SVG line plot");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  ConfigOverrides overrides;
  overrides.suite = suite;
  take(overrides.seed, seedOpt, seed);
  take(overrides.output, outOpt, out);
  take(overrides.format, formatOpt, format);
  take(overrides.K, kOpt, k);
  take(overrides.kMax, kMaxOpt, kMax);
  take(overrides.trials, trialsOpt, trials);
  take(overrides.dim, dimOpt, dim);
  take(overrides.rho, rhoOpt, rho);
  take(overrides.sigma2, sigmaOpt, sigma2);
  take(overrides.drift, driftOpt, drift);
  take(overrides.passes, passesOpt, passes);
  take(overrides.plot, plotOpt, plot);

  try {
    const std::string text = configPath.empty() ? std::string{} : read_file(configPath);
    const ExperimentConfig cfg = parse_config(text, overrides);
    const SuiteResult result = run_suite(cfg);

    if (cfg.output) {
      emit(result.records, cfg.format, *cfg.output);
    } else if (cfg.format == OutputFormat::Json) {
      write_json(result.records, std::cout);
    } else {
      write_csv(result.records, std::cout);
    }
    if (cfg.plot && result.plot) {
      emit_plot(*result.plot, *cfg.plot);
    }

    if (!result.all_passed()) {
      std::cerr << "ttsac: one or more numerical checks failed\n";
      return kExitNumerical;
    }
    return kExitOk;
  } catch (const UsageError& e) {
    std::cerr << "ttsac: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "ttsac: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ttsac::DegenerateInputError& e) {
    std::cerr << "ttsac: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "ttsac: " << e.what() << '\n';
    return kExitNumerical;
  }
}
