// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ttsac/adaptation.hpp"
#include "ttsac/analytics.hpp"
#include "ttsac/harness/config.hpp"
#include "ttsac/harness/emit.hpp"
#include "ttsac/harness/suites.hpp"

namespace {

using namespace ttsac;
using namespace ttsac::harness;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double number(const ExperimentRecord& r, const std::string& key) {
  const auto& v = r.results.at(key);
  if (const auto* d = std::get_if<double>(&v)) {
    return *d;
  }
  return static_cast<double>(std::get<std::int64_t>(v));
}

bool flag(const ExperimentRecord& r, const std::string& key) { return std::get<bool>(r.results.at(key)); }

std::string text_param(const ExperimentRecord& r, const std::string& key) {
  return std::get<std::string>(r.params.at(key));
}

ExperimentConfig config(const std::string& suite, const std::function<void(ConfigOverrides&)>& edit = {}) {
  ConfigOverrides o;
  o.suite = suite;
  if (edit) {
    edit(o);
  }
  return parse_config("", o);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Matrix double_sum_oracle(const Matrix& g0, double rho, std::size_t K) {
  double s = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = 0; j < K; ++j) {
      s += std::pow(rho, std::abs(static_cast<double>(i) - static_cast<double>(j)));
    }
  }
  return (s / static_cast<double>(K * K)) * g0;
}

Outcome covariance_formula() {
  Matrix g0(3, 3);
  g0 << 2.0, 0.4, -0.1, 0.4, 1.0, 0.2, -0.1, 0.2, 0.5;
  double worstOracle = 0.0;
  for (double rho : {0.0, 0.3, 0.5, 0.9}) {
    const LaggedCovarianceModel model(g0, rho);
    for (std::size_t K = 1; K <= 32; ++K) {
      worstOracle = std::max(worstOracle,
                             (aggregated_covariance(model, K) - double_sum_oracle(g0, rho, K)).cwiseAbs().maxCoeff());
    }
  }

  const auto full = run_suite(config("covariance", [](auto& o) { o.trials = 50000; }));
  const auto scalar = run_suite(config("covariance", [](auto& o) {
    o.trials = 50000;
    o.dim = 1;
    o.K = 3;
    o.rho = 0.5;
  }));
  const auto& s = scalar.records.front();
  const bool scalarOk = std::abs(number(s, "analytic") - 11.0 / 18.0) < 1e-15 && s.passed();
  const bool pass = worstOracle <= 1e-12 && full.all_passed() && scalarOk;
  return {pass, "oracle max diff " + fmt(worstOracle) + ", " + std::to_string(full.records.size()) +
                    " entries in band=" + (full.all_passed() ? "yes" : "no") + ", scalar analytic " +
                    fmt(number(s, "analytic")) + " empirical " + fmt(number(s, "empirical"))};
}

Outcome uncorrelated_special_case() {
  bool exact = true;
  Rng rng(1);
  for (std::size_t d : {1u, 3u, 8u}) {
    Matrix g(d, d);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      g.data()[i] = rng.normal();
    }
    const Matrix g0 = g * g.transpose();
    const LaggedCovarianceModel model(g0, 0.0);
    for (std::size_t K = 1; K <= 64; ++K) {
      exact = exact && aggregated_covariance(model, K) == g0 / static_cast<double>(K);
    }
  }
  return {exact, "rho=0 equals Gamma0/K bit-exactly for d in {1,3,8}, K<=64"};
}

Outcome lipschitz_bound() {
  const auto result = run_suite(config("bound"));
  bool bounded = result.records.size() == 12;
  bool affineExact = true;
  double worstRatio = 0.0;
  double affineZ = 0.0;
  double otherZ = 0.0;
  for (const auto& r : result.records) {
    bounded = bounded && flag(r, "pass_bound");
    worstRatio = std::max(worstRatio, number(r, "empirical") / number(r, "bound"));
    if (!r.results.contains("pass_exact")) {
      continue;
    }
    const double z = std::abs(number(r, "empirical") - number(r, "analytic")) / number(r, "std_error");
    if (text_param(r, "family") == "affine") {
      affineExact = affineExact && flag(r, "pass_exact");
      affineZ = std::max(affineZ, z);
    } else {
      otherZ = std::max(otherZ, z);
    }
  }
  // The criterion asks for the exact match in the affine case only; the
  // pipeline's extra exact check is reported but not scored.
  return {bounded && affineExact, std::to_string(result.records.size()) + " rows, max empirical/bound " +
                                      fmt(worstRatio) + ", affine exact max |z| " + fmt(affineZ) +
                                      ", pipeline exact max |z| " + fmt(otherZ) + " (informational)"};
}

Outcome contraction() {
  const auto result = run_suite(config("contraction"));
  double rate = 0.0;
  bool iterates = true;
  bool step = false;
  bool rateOk = false;
  std::string stepDetail;
  for (const auto& r : result.records) {
    if (r.params.contains("iteration")) {
      iterates = iterates && flag(r, "pass_bound") && (!r.results.contains("pass_residual") || flag(r, "pass_residual"));
    } else if (text_param(r, "check") == "fitted-rate") {
      rate = number(r, "rate");
      rateOk = std::abs(rate - 0.5) <= 1e-9;
    } else if (text_param(r, "check") == "expected-contraction") {
      step = flag(r, "pass");
      stepDetail = fmt(number(r, "error")) + " <= " + fmt(number(r, "bound"));
    }
  }
  return {iterates && rateOk && step,
          "fitted rate " + fmt(rate) + ", per-iterate bound " + (iterates ? "held" : "violated") +
              ", single step " + stepDetail};
}

Outcome unbiasedness() {
  const auto result = run_suite(config("contraction"));
  for (const auto& r : result.records) {
    if (r.params.contains("check") && text_param(r, "check") == "unbiasedness") {
      return {flag(r, "pass"), "max standardized entry error " + fmt(number(r, "max_standardized_error")) + " (limit 4)"};
    }
  }
  return {false, "no unbiasedness record"};
}

Outcome bias_variance() {
  Vector offset(2);
  offset << 0.3, 0.0;
  const auto hand = decompose(Matrix::Identity(2, 2), offset, 0.1 * Matrix::Identity(2, 2));
  const bool handOk = std::abs(hand.biasSq - 0.09) <= 1e-12 && std::abs(hand.variance - 0.2) <= 1e-12 &&
                      std::abs(hand.total - 0.29) <= 1e-12;

  // The same hand case realised by a simulated affine system (A = I, δ = (0.2, 0), K = 4).
  Vector drift(2);
  drift << 0.2, 0.0;
  const System s =
      AffineSystem(Matrix::Identity(2, 2), Vector::Zero(2), LaggedCovarianceModel::isotropic(2, 0.8, 0.0), drift);
  const auto sim = bias_variance_decompose(s, Feature{1.0, -1.0}, 4, {}, 20000, SeedSpec(42));
  const bool simOk = std::abs(sim.empiricalTotal->mean - sim.total) <= 3.0 * sim.empiricalTotal->standardError;

  const auto suite = run_suite(config("bias-variance"));
  const auto& r = suite.records.front();
  return {handOk && simOk && suite.all_passed(),
          "hand total " + fmt(hand.total) + ", simulated " + fmt(sim.empiricalTotal->mean) + " vs " + fmt(sim.total) +
              ", suite " + fmt(number(r, "empirical")) + " vs " + fmt(number(r, "analytic")) + " (SE " +
              fmt(number(r, "std_error")) + ")"};
}

Outcome k_star_shape() {
  const auto hand = optimal_k(1.0, [](std::size_t k) { return 0.1 * static_cast<double>(k - 1); }, 6);
  const std::vector<double> expected{1.0, 0.51, 1.0 / 3.0 + 0.04, 0.34, 0.36, 1.0 / 6.0 + 0.25};
  bool handOk = hand.kStar == 4;
  for (std::size_t i = 0; i < 6; ++i) {
    handOk = handOk && std::abs(hand.objective[i] - expected[i]) <= 1e-12;
  }

  int inWindow = 0;
  bool shapes = true;
  std::int64_t analytic = 0;
  std::string stars;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto result = run_suite(config("k-sweep", [&](auto& o) { o.seed = seed; }));
    const auto& summary = result.records.back();
    const auto kStar = std::get<std::int64_t>(summary.results.at("k_star_empirical"));
    analytic = std::get<std::int64_t>(summary.results.at("k_star_analytic"));
    inWindow += (kStar >= 3 && kStar <= 5) ? 1 : 0;
    shapes = shapes && flag(summary, "pass_shape");
    stars += std::to_string(kStar) + (seed < 10 ? "," : "");
  }
  return {handOk && analytic == 4 && inWindow >= 8 && shapes,
          "analytic K*=" + std::to_string(analytic) + ", empirical K* per seed [" + stars + "], " +
              std::to_string(inWindow) + "/10 in {3,4,5}, non-monotone with interior minimum=" +
              (shapes ? "yes" : "no")};
}

Outcome stationarity() {
  double worst = 0.0;
  for (const char* shape : {"identity", "orthogonal", "random"}) {
    for (double drift : {0.0, 0.05}) {
      const auto cfg = parse_config(std::string(R"({"suite":"contraction","system":{"matrix":")") + shape + "\"}}");
      ExperimentConfig c = cfg;
      c.system.drift = drift;
      const System s = build_system(c, Family::Affine);
      // With drift the fixed point of T over horizon K shifts by (I − A)^{-1} δ (K + 1) / 2.
      const auto& affine = std::get<AffineSystem>(s);
      const Matrix iMinusA = Matrix::Identity(affine.a().rows(), affine.a().cols()) - affine.a();
      const double half = (static_cast<double>(c.K) + 1.0) / 2.0;
      const Vector fStar = iMinusA.fullPivLu().solve(affine.b() + half * affine.drift());
      worst = std::max(worst, self_consistency_gradient(s, Feature(fStar), {}, c.K).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-10, "max |2(f* - T(f*))| over 6 affine systems " + fmt(worst)};
}

Outcome pipeline_benefit() {
  const auto drifted = run_suite(config("pipeline"));
  const auto still = run_suite(config("pipeline", [](auto& o) { o.drift = 0.0; }));
  auto describe = [](const SuiteResult& r) {
    std::string out;
    for (const auto& rec : r.records) {
      if (rec.results.contains("pass")) {
        out += text_param(rec, "metric") + " delta " + fmt(number(rec, "delta")) + " (SE " +
               fmt(number(rec, "delta_std_error")) + ") ";
      }
    }
    return out;
  };
  return {drifted.all_passed() && still.all_passed(),
          "beta=0.1: " + describe(drifted) + "| beta=0: " + describe(still)};
}

#ifdef TTSAC_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + TTSAC_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
#endif

Outcome contracts() {
  std::string detail;
  bool pass = true;

  // In-process determinism for every suite at reduced trial counts.
  for (const char* suite : {"covariance", "contraction", "bound", "bias-variance", "k-sweep", "pipeline"}) {
    const auto cfg = config(suite, [](auto& o) { o.trials = 300; });
    std::ostringstream a;
    std::ostringstream b;
    write_csv(run_suite(cfg).records, a);
    write_csv(run_suite(cfg).records, b);
    pass = pass && a.str() == b.str();
  }
  detail += std::string("in-process CSV identical=") + (pass ? "yes" : "no");

  // Stream isolation: an unlisted stream is bit-identical after refinement.
  ConditioningState state(Feature{0.0, 0.0});
  const Feature motionFeature{0.1, -0.7, 3.3};
  state.set(kMotionStream, motionFeature);
  const StreamSystems systems{
      {kIdentityStream, AffineSystem(0.5 * Matrix::Identity(2, 2), Vector::Ones(2),
                                     LaggedCovarianceModel::isotropic(2, 1.0, 0.5))},
      {kMotionStream, AffineSystem(0.2 * Matrix::Identity(3, 3), Vector::Ones(3),
                                   LaggedCovarianceModel::isotropic(3, 1.0, 0.0))},
  };
  const auto after = refine(systems, state, {.K = 4, .passes = 3}, MotionSequence::stationary(0, 4), SeedSpec(42));
  const bool isolated = after.first.at(kMotionStream) == motionFeature;
  pass = pass && isolated;
  detail += std::string(", stream isolation=") + (isolated ? "yes" : "no");

#ifdef TTSAC_CLI_PATH
  const auto dir = std::filesystem::temp_directory_path() / "ttsac-acceptance";
  std::filesystem::create_directories(dir);
  const auto a = dir / "a.csv";
  const auto b = dir / "b.csv";
  const auto cfgFile = dir / "cfg.json";
  std::ofstream(cfgFile) << R"({"suite": "covariance", "seed": 42, "M": 2000})";
  const int first = run_cli("covariance --config " + cfgFile.string() + " --seed 7 --out " + a.string());
  const int second = run_cli("covariance --config " + cfgFile.string() + " --seed 7 --out " + b.string());
  const bool bytes = first == 0 && second == 0 && slurp(a) == slurp(b) && !slurp(a).empty();

  const int badRho = run_cli("covariance --rho 1.2");
  const int badSuite = run_cli("no-such-suite");
  const int badFlags = run_cli("covariance --k 2 --k-max 4");
  const int badPath = run_cli("covariance --trials 100 --out /nonexistent-dir/out.csv");
  const auto diverging = dir / "diverge.json";
  std::ofstream(diverging) << R"({"suite": "contraction", "system": {"scale": 1.5}})";
  const int numerical = run_cli("contraction --config " + diverging.string());
  const bool codes = first == 0 && badRho == 1 && badSuite == 1 && badFlags == 1 && badPath == 1 && numerical == 2;
  pass = pass && bytes && codes;
  detail += std::string(", CLI CSV identical=") + (bytes ? "yes" : "no") + ", exit codes ok/rho/suite/flags/io/numeric=" +
            std::to_string(first) + "/" + std::to_string(badRho) + "/" + std::to_string(badSuite) + "/" +
            std::to_string(badFlags) + "/" + std::to_string(badPath) + "/" + std::to_string(numerical);
  std::filesystem::remove_all(dir);
#else
  pass = false;
  detail += ", CLI not built";
#endif
  return {pass, detail};
}

struct Criterion {
  int id;
  const char* name;
  double budgetSeconds;
  Outcome (*run)();
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "aggregated covariance formula", 10.0, covariance_formula},
      {2, "uncorrelated special case", 1.0, uncorrelated_special_case},
      {3, "Lipschitz output-variance bound", 20.0, lipschitz_bound},
      {4, "linear contraction", 10.0, contraction},
      {5, "Monte Carlo unbiasedness", 5.0, unbiasedness},
      {6, "bias-variance exactness", 10.0, bias_variance},
      {7, "optimal K shape", 30.0, k_star_shape},
      {8, "self-consistency stationarity", 1.0, stationarity},
      {9, "end-to-end refinement benefit", 60.0, pipeline_benefit},
      {10, "determinism and interface contracts", 60.0, contracts},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool inTime = seconds <= c.budgetSeconds;
    const bool pass = out.pass && inTime;
    failures += pass ? 0 : 1;
    std::printf("criterion %2d %-4s %s: %s [%.2fs / %.0fs]\n", c.id, pass ? "PASS" : "FAIL", c.name,
                out.detail.c_str(), seconds, c.budgetSeconds);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
