#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ttsac/adaptation.hpp"
#include "ttsac/core.hpp"
#include "ttsac/operators.hpp"

namespace ttsac {

/// Sample mean with its standard error.
struct MonteCarloEstimate {
  double mean = 0.0;
  double standardError = 0.0;
};

/// Exact covariance of the mean of K frames of an AR(1) process:
/// (1/K) (Γ_0 + 2 Σ_{τ=1}^{K−1} (1 − τ/K) Γ_τ).
[[nodiscard]] Matrix aggregated_covariance(const LaggedCovarianceModel& model, std::size_t K);

/// Sum over independent noise components.
[[nodiscard]] Matrix aggregated_covariance(std::span<const LaggedCovarianceModel> components, std::size_t K);

/// Aggregated covariance of T̂(f) for a system's full feature-space noise.
[[nodiscard]] Matrix aggregated_covariance(const System& system, const MotionParams& motion, std::size_t K);

/// Unbiased (M − 1) sample covariance of f̄ over M independent trials.
/// Trial i samples its own motion and noise from `seed.trial(i)`.
[[nodiscard]] Matrix empirical_aggregated_covariance(const System& system, const Feature& f, std::size_t K,
                                                     const MotionParams& motion, std::size_t trials,
                                                     SeedSpec seed);

/// Empirical covariances for every K = 1..kMax from the same trials: each
/// trial generates kMax frames and every prefix mean is one sample.
[[nodiscard]] std::vector<Matrix> empirical_aggregated_covariance_prefixes(const System& system, const Feature& f,
                                                                          std::size_t kMax,
                                                                          const MotionParams& motion,
                                                                          std::size_t trials, SeedSpec seed);

struct OutputVarianceBound {
  /// L_G² · tr(Cov(f̄)).
  double bound = 0.0;
  /// Monte Carlo estimate of E‖G(f̄) − G(μ)‖².
  double empirical = 0.0;
  double standardError = 0.0;
  /// tr(J Cov Jᵀ) when G is affine in f, otherwise empty.
  std::optional<double> exact;
};

/// Lipschitz bound on output variance, checked by sampling f̄ ~ N(μ, covAgg).
[[nodiscard]] OutputVarianceBound output_variance_bound(const System& system, const Vector& mu,
                                                        const Matrix& covAgg, std::size_t trials, SeedSpec seed);

/// Same bound, with f̄ taken from actual K-frame generations conditioned on
/// f and μ = E[f_t] of the stationary (drift-free) system.
[[nodiscard]] OutputVarianceBound generated_output_variance(const System& system, const Feature& f,
                                                            std::size_t K, const MotionParams& motion,
                                                            std::size_t trials, SeedSpec seed);

struct ContractionFit {
  double rate = 0.0;
  bool converged = false;
};

/// exp of the least-squares slope of log‖f^(k) − f*‖ against k, identity stream.
[[nodiscard]] ContractionFit estimate_contraction_rate(const RefinementTrace& trace, const Feature& fStar);

struct BiasVarianceReport {
  double biasSq = 0.0;
  double variance = 0.0;
  double total = 0.0;
  std::optional<MonteCarloEstimate> empiricalTotal;
};

/// ‖J Δ‖² + tr(J C Jᵀ), where Δ = μ_K − μ.
[[nodiscard]] BiasVarianceReport decompose(const Matrix& jacobian, const Vector& meanOffset, const Matrix& covAgg);

/// Mean offset μ_K − μ for the drift model, with μ the first-frame mean.
[[nodiscard]] Vector aggregation_offset(const System& system, const Vector& f, const MotionParams& motion,
                                        std::size_t K);

/// Decomposition for systems with a constant Jacobian, plus an M-trial
/// estimate of E‖G(f̄) − G(μ)‖².
[[nodiscard]] BiasVarianceReport bias_variance_decompose(const System& system, const Feature& f, std::size_t K,
                                                         const MotionParams& motion, std::size_t trials,
                                                         SeedSpec seed);

struct ObjectiveCurve {
  /// objective[K - 1] = σ²/K + Bias(K)².
  std::vector<double> objective;
  std::size_t kStar = 1;
};

/// Exhaustive scan of σ²/K + Bias(K)² over K = 1..kMax; ties go to the smaller K.
[[nodiscard]] ObjectiveCurve optimal_k(double sigma2, const std::function<double(std::size_t)>& bias,
                                       std::size_t kMax);

struct KSweepEntry {
  std::size_t K = 0;
  double biasSq = 0.0;
  double variance = 0.0;
  double total = 0.0;
  MonteCarloEstimate empiricalTotal;
};

struct KSweepResult {
  std::vector<KSweepEntry> perK;
  std::size_t kStarAnalytic = 1;
  std::size_t kStarEmpirical = 1;
};

/// Analytic and empirical aggregation error for K = 1..kMax. Each trial
/// generates kMax frames once and evaluates every prefix, so all K share
/// the same random numbers.
[[nodiscard]] KSweepResult k_sweep(const System& system, const Feature& f, const MotionParams& motion,
                                   std::size_t kMax, std::size_t trials, SeedSpec seed);

/// Index (1-based) of the smallest value; ties go to the smaller index.
[[nodiscard]] std::size_t argmin_1based(std::span<const double> values);

}  // namespace ttsac
