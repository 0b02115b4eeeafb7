#include "ttsac/analytics.hpp"

#include <cmath>
#include <string>

namespace ttsac {

namespace {

constexpr std::uint64_t kMotionChannel = 7;

/// Welford accumulator for a scalar statistic.
class RunningStat {
 public:
  void add(double x) noexcept {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  [[nodiscard]] MonteCarloEstimate estimate() const noexcept {
    if (n_ < 2) {
      return {mean_, 0.0};
    }
    const double variance = m2_ / static_cast<double>(n_ - 1);
    return {mean_, std::sqrt(variance / static_cast<double>(n_))};
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

MotionParams motion_for(const System& system, const MotionParams& motion) {
  if (std::holds_alternative<LinearPipelineSystem>(system)) {
    return motion;
  }
  // Affine and nonlinear families ignore the driving signal.
  return MotionParams{};
}

/// Encoded frames of trial `index`, each trial with its own motion draw.
FeatureSequence trial_sequence(const System& system, const Feature& f, const MotionParams& motion,
                               std::size_t length, SeedSpec seed, std::size_t index) {
  const SeedSpec trialSeed = seed.trial(index);
  const MotionSequence input =
      MotionSequence::sample(motion_for(system, motion), length, trialSeed.substream(kMotionChannel));
  return generate_sequence(system, f, input, length, trialSeed);
}

Vector mean_expected_frame(const System& system, const Vector& f, const MotionParams& motion, std::size_t K) {
  const MotionParams effective = motion_for(system, motion);
  Vector sum = Vector::Zero(f.size());
  for (std::size_t t = 1; t <= K; ++t) {
    sum += expected_frame(system, f, effective, t);
  }
  return sum / static_cast<double>(K);
}

void require_constant_jacobian(const System& system, const char* op) {
  if (std::holds_alternative<NonlinearSystem>(system)) {
    throw UnsupportedOperationError(std::string(op) +
                                    ": the decomposition is only exact for affine and linear-pipeline systems");
  }
}

}  // namespace

Matrix aggregated_covariance(const LaggedCovarianceModel& model, std::size_t K) {
  if (K == 0) {
    throw std::invalid_argument("aggregated_covariance: K must be at least 1");
  }
  const double k = static_cast<double>(K);
  const double rho = model.correlation();
  double weight = 1.0;
  double rhoPower = 1.0;
  for (std::size_t lag = 1; lag < K; ++lag) {
    rhoPower *= rho;
    weight += 2.0 * (1.0 - static_cast<double>(lag) / k) * rhoPower;
  }
  // Scale then divide, so rho = 0 gives exactly Γ_0 / K.
  return (weight * model.gamma0()) / k;
}

Matrix aggregated_covariance(std::span<const LaggedCovarianceModel> components, std::size_t K) {
  if (components.empty()) {
    throw std::invalid_argument("aggregated_covariance: no noise components");
  }
  Matrix sum = aggregated_covariance(components.front(), K);
  for (const auto& c : components.subspan(1)) {
    if (c.dim() != static_cast<std::size_t>(sum.rows())) {
      throw std::invalid_argument("aggregated_covariance: noise components differ in dimension");
    }
    sum += aggregated_covariance(c, K);
  }
  return sum;
}

Matrix aggregated_covariance(const System& system, const MotionParams& motion, std::size_t K) {
  const auto components = feature_noise_components(system, motion_for(system, motion));
  return aggregated_covariance(std::span<const LaggedCovarianceModel>(components), K);
}

Matrix empirical_aggregated_covariance(const System& system, const Feature& f, std::size_t K,
                                       const MotionParams& motion, std::size_t trials, SeedSpec seed) {
  if (K == 0) {
    throw std::invalid_argument("empirical_aggregated_covariance: K must be at least 1");
  }
  return empirical_aggregated_covariance_prefixes(system, f, K, motion, trials, seed).back();
}

std::vector<Matrix> empirical_aggregated_covariance_prefixes(const System& system, const Feature& f,
                                                             std::size_t kMax, const MotionParams& motion,
                                                             std::size_t trials, SeedSpec seed) {
  if (kMax == 0) {
    throw std::invalid_argument("empirical_aggregated_covariance: K must be at least 1");
  }
  if (trials < 2) {
    throw std::invalid_argument("empirical_aggregated_covariance: need at least 2 trials");
  }
  const auto d = static_cast<Eigen::Index>(f.dim());
  std::vector<Matrix> samples(kMax, Matrix(static_cast<Eigen::Index>(trials), d));
  for (std::size_t i = 0; i < trials; ++i) {
    const auto seq = trial_sequence(system, f, motion, kMax, seed, i);
    Vector sum = Vector::Zero(d);
    for (std::size_t k = 1; k <= kMax; ++k) {
      sum += seq[k - 1].values();
      samples[k - 1].row(static_cast<Eigen::Index>(i)) = (sum / static_cast<double>(k)).transpose();
    }
  }
  std::vector<Matrix> covariances;
  covariances.reserve(kMax);
  for (const Matrix& s : samples) {
    const Eigen::RowVectorXd mean = s.colwise().mean();
    const Matrix centered = s.rowwise() - mean;
    covariances.push_back((centered.transpose() * centered) / static_cast<double>(trials - 1));
  }
  return covariances;
}

OutputVarianceBound output_variance_bound(const System& system, const Vector& mu, const Matrix& covAgg,
                                          std::size_t trials, SeedSpec seed) {
  const auto d = static_cast<Eigen::Index>(feature_dim(system));
  if (mu.size() != d || covAgg.rows() != d || covAgg.cols() != d) {
    throw std::invalid_argument("output_variance_bound: dimension mismatch");
  }
  if (!is_symmetric_psd(covAgg)) {
    throw std::invalid_argument("output_variance_bound: covariance must be symmetric PSD");
  }
  if (trials == 0) {
    throw std::invalid_argument("output_variance_bound: need at least 1 trial");
  }
  const double lipschitz = lipschitz_constant(system);
  OutputVarianceBound out;
  out.bound = lipschitz * lipschitz * covAgg.trace();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(covAgg);
  const Matrix factor = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  const Vector reference = generator_output(system, mu);
  RunningStat stat;
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng = seed.trial(i).rng();
    const Vector fbar = mu + factor * rng.normal_vector(static_cast<std::size_t>(d));
    stat.add((generator_output(system, fbar) - reference).squaredNorm());
  }
  const auto est = stat.estimate();
  out.empirical = est.mean;
  out.standardError = est.standardError;
  if (!std::holds_alternative<NonlinearSystem>(system)) {
    const Matrix j = generator_jacobian(system, mu);
    out.exact = (j * covAgg * j.transpose()).trace();
  }
  return out;
}

OutputVarianceBound generated_output_variance(const System& system, const Feature& f, std::size_t K,
                                              const MotionParams& motion, std::size_t trials, SeedSpec seed) {
  if (K == 0 || trials == 0) {
    throw std::invalid_argument("generated_output_variance: K and trials must be positive");
  }
  const Matrix covAgg = aggregated_covariance(system, motion, K);
  const Vector mu = mean_expected_frame(system, f.values(), motion, K);
  const Vector reference = generator_output(system, mu);
  const double lipschitz = lipschitz_constant(system);

  OutputVarianceBound out;
  out.bound = lipschitz * lipschitz * covAgg.trace();
  RunningStat stat;
  for (std::size_t i = 0; i < trials; ++i) {
    const auto seq = trial_sequence(system, f, motion, K, seed, i);
    const Vector fbar = feature_mean(seq, K).values();
    stat.add((generator_output(system, fbar) - reference).squaredNorm());
  }
  const auto est = stat.estimate();
  out.empirical = est.mean;
  out.standardError = est.standardError;
  if (!std::holds_alternative<NonlinearSystem>(system)) {
    const Matrix j = generator_jacobian(system, mu);
    out.exact = (j * covAgg * j.transpose()).trace();
  }
  return out;
}

ContractionFit estimate_contraction_rate(const RefinementTrace& trace, const Feature& fStar) {
  if (trace.iterates.size() < 3) {
    throw std::invalid_argument("estimate_contraction_rate: need at least 3 iterates");
  }
  std::vector<double> logs;
  logs.reserve(trace.iterates.size());
  for (const auto& state : trace.iterates) {
    const Feature& f = state.identity();
    if (f.dim() != fStar.dim()) {
      throw std::invalid_argument("estimate_contraction_rate: dimension mismatch");
    }
    const double err = (f.values() - fStar.values()).norm();
    if (err == 0.0) {
      return {0.0, true};
    }
    logs.push_back(std::log(err));
  }
  const double n = static_cast<double>(logs.size());
  const double meanK = (n - 1.0) / 2.0;
  double meanLog = 0.0;
  for (double v : logs) {
    meanLog += v;
  }
  meanLog /= n;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < logs.size(); ++k) {
    const double dk = static_cast<double>(k) - meanK;
    num += dk * (logs[k] - meanLog);
    den += dk * dk;
  }
  return {std::exp(num / den), false};
}

BiasVarianceReport decompose(const Matrix& jacobian, const Vector& meanOffset, const Matrix& covAgg) {
  if (jacobian.cols() != meanOffset.size() || covAgg.rows() != meanOffset.size() ||
      covAgg.cols() != meanOffset.size()) {
    throw std::invalid_argument("decompose: dimension mismatch");
  }
  BiasVarianceReport report;
  report.biasSq = (jacobian * meanOffset).squaredNorm();
  report.variance = (jacobian * covAgg * jacobian.transpose()).trace();
  report.total = report.biasSq + report.variance;
  return report;
}

Vector aggregation_offset(const System& system, const Vector& f, const MotionParams& motion, std::size_t K) {
  if (K == 0) {
    throw std::invalid_argument("aggregation_offset: K must be at least 1");
  }
  return mean_expected_frame(system, f, motion, K) - expected_frame(system, f, motion_for(system, motion), 1);
}

BiasVarianceReport bias_variance_decompose(const System& system, const Feature& f, std::size_t K,
                                           const MotionParams& motion, std::size_t trials, SeedSpec seed) {
  require_constant_jacobian(system, "bias_variance_decompose");
  if (K == 0) {
    throw std::invalid_argument("bias_variance_decompose: K must be at least 1");
  }
  const Matrix j = generator_jacobian(system, f.values());
  BiasVarianceReport report =
      decompose(j, aggregation_offset(system, f.values(), motion, K), aggregated_covariance(system, motion, K));
  if (trials > 0) {
    const Vector mu = expected_frame(system, f.values(), motion_for(system, motion), 1);
    RunningStat stat;
    for (std::size_t i = 0; i < trials; ++i) {
      const auto seq = trial_sequence(system, f, motion, K, seed, i);
      stat.add((j * (feature_mean(seq, K).values() - mu)).squaredNorm());
    }
    report.empiricalTotal = stat.estimate();
  }
  return report;
}

std::size_t argmin_1based(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("argmin over an empty range");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) {
      best = i;
    }
  }
  return best + 1;
}

ObjectiveCurve optimal_k(double sigma2, const std::function<double(std::size_t)>& bias, std::size_t kMax) {
  if (kMax == 0) {
    throw std::invalid_argument("optimal_k: kMax must be at least 1");
  }
  ObjectiveCurve curve;
  curve.objective.reserve(kMax);
  for (std::size_t k = 1; k <= kMax; ++k) {
    const double b = bias(k);
    curve.objective.push_back(sigma2 / static_cast<double>(k) + b * b);
  }
  curve.kStar = argmin_1based(curve.objective);
  return curve;
}

KSweepResult k_sweep(const System& system, const Feature& f, const MotionParams& motion, std::size_t kMax,
                     std::size_t trials, SeedSpec seed) {
  require_constant_jacobian(system, "k_sweep");
  if (kMax == 0) {
    throw std::invalid_argument("k_sweep: kMax must be at least 1");
  }
  const Matrix j = generator_jacobian(system, f.values());
  const Vector mu = expected_frame(system, f.values(), motion_for(system, motion), 1);

  KSweepResult result;
  result.perK.reserve(kMax);
  for (std::size_t k = 1; k <= kMax; ++k) {
    const auto report =
        decompose(j, aggregation_offset(system, f.values(), motion, k), aggregated_covariance(system, motion, k));
    result.perK.push_back({k, report.biasSq, report.variance, report.total, {}});
  }

  std::vector<RunningStat> stats(kMax);
  for (std::size_t i = 0; i < trials; ++i) {
    const auto seq = trial_sequence(system, f, motion, kMax, seed, i);
    Vector sum = Vector::Zero(f.values().size());
    for (std::size_t k = 1; k <= kMax; ++k) {
      sum += seq[k - 1].values();
      stats[k - 1].add((j * (sum / static_cast<double>(k) - mu)).squaredNorm());
    }
  }

  std::vector<double> analytic;
  std::vector<double> empirical;
  for (std::size_t k = 0; k < kMax; ++k) {
    result.perK[k].empiricalTotal = stats[k].estimate();
    analytic.push_back(result.perK[k].total);
    empirical.push_back(result.perK[k].empiricalTotal.mean);
  }
  result.kStarAnalytic = argmin_1based(analytic);
  result.kStarEmpirical = argmin_1based(empirical);
  return result;
}

}  // namespace ttsac
