#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ttsac::harness {

/// Bad configuration or command line; the CLI maps it to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Suite { Covariance, Contraction, Bound, BiasVariance, KSweep, Pipeline };
enum class Family { Affine, Nonlinear, LinearPipeline };
/// Shape of the affine linear part: scale·I, scale·(orthogonal), or a
/// Gaussian matrix rescaled to spectral norm `scale`.
enum class MatrixShape { ScaledIdentity, Orthogonal, Random };
enum class OutputFormat { Csv, Json };

[[nodiscard]] Suite parse_suite(std::string_view name);
[[nodiscard]] std::string_view to_string(Suite suite);
[[nodiscard]] Family parse_family(std::string_view name);
[[nodiscard]] std::string_view to_string(Family family);
[[nodiscard]] MatrixShape parse_matrix_shape(std::string_view name);
[[nodiscard]] std::string_view to_string(MatrixShape shape);
[[nodiscard]] OutputFormat parse_format(std::string_view name);

struct SystemSpec {
  Family family = Family::Affine;
  MatrixShape matrix = MatrixShape::ScaledIdentity;
  /// Spectral norm of A (affine) or of W (nonlinear).
  double scale = 0.5;
  /// Nonlinear gain c.
  double gain = 0.8;
  double rho = 0.5;
  /// Trace of the per-frame feature-noise covariance Γ_0.
  double sigma2 = 1.0;
  /// Drift rate β per frame.
  double drift = 0.0;
  /// Drift direction; feature space for affine, motion space for the pipeline.
  /// Empty selects the first coordinate axis.
  std::vector<double> direction;
  std::size_t renderDim = 16;
  std::size_t motionDim = 4;
  /// ‖Q P e_j‖ for every motion axis j.
  double coupling = 2.0;
  double motionNoise = 0.0;
  /// Norm of the seeded initial conditioning feature.
  double featureNorm = 4.0;
};

struct ExperimentConfig {
  Suite suite = Suite::Covariance;
  std::size_t d = 8;
  std::size_t K = 4;
  /// Set only when K was given explicitly; the bound suite otherwise sweeps {1, 2, 4, 8}.
  bool kExplicit = false;
  std::size_t kMax = 10;
  std::size_t T = 40;
  std::size_t M = 20000;
  std::size_t passes = 1;
  SystemSpec system;
  std::uint64_t seed = 42;
  std::optional<std::string> output;
  OutputFormat format = OutputFormat::Csv;
  std::optional<std::string> plot;
};

/// Values given on the command line. Each set field overrides the file.
struct ConfigOverrides {
  std::optional<std::string> suite;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  std::optional<std::string> format;
  std::optional<std::size_t> K;
  std::optional<std::size_t> kMax;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> dim;
  std::optional<double> rho;
  std::optional<double> sigma2;
  std::optional<double> drift;
  std::optional<std::size_t> passes;
  std::optional<std::string> plot;
  std::optional<std::string> family;
};

/// Parse a JSON config document (may be empty) and apply overrides.
///
/// Top-level keys: suite, d, K, kMax, T, M, passes, seed, output, format,
/// plot, and a nested "system" object with family, matrix, scale, gain,
/// rho, sigma2, drift, direction, p, m, coupling, motionNoise,
/// featureNorm. Unknown keys are rejected. Unset values take per-suite
/// defaults. Throws UsageError.
[[nodiscard]] ExperimentConfig parse_config(std::string_view text, const ConfigOverrides& overrides = {});

}  // namespace ttsac::harness
