#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace ttsac {

using Vector = Eigen::VectorXd;
/// Dense row-major storage for every matrix in the project.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Largest feature dimension accepted by the experiment harness.
inline constexpr std::size_t kMaxDimension = 64;

/// Input is well-formed but mathematically degenerate (e.g. a zero vector
/// where a direction is required).
class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The requested operation has no closed form for this system family.
class UnsupportedOperationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A d-dimensional conditioning or encoded-frame feature. All entries finite.
class Feature {
 public:
  explicit Feature(Vector values);
  Feature(std::initializer_list<double> values);

  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(values_.size()); }
  [[nodiscard]] const Vector& values() const noexcept { return values_; }
  [[nodiscard]] double operator[](std::size_t i) const { return values_(static_cast<Eigen::Index>(i)); }

  friend bool operator==(const Feature& a, const Feature& b) {
    return a.values_.size() == b.values_.size() && a.values_ == b.values_;
  }

 private:
  Vector values_;
};

/// Encoded frames f_1..f_T of one generated sequence; all frames share a dimension.
class FeatureSequence {
 public:
  FeatureSequence() = default;
  explicit FeatureSequence(std::vector<Feature> frames);

  void push_back(Feature frame);

  [[nodiscard]] std::size_t size() const noexcept { return frames_.size(); }
  [[nodiscard]] bool empty() const noexcept { return frames_.empty(); }
  [[nodiscard]] std::size_t dim() const;
  /// Zero-based: frame t (1-based in the math) lives at index t-1.
  [[nodiscard]] const Feature& operator[](std::size_t i) const { return frames_.at(i); }
  [[nodiscard]] auto begin() const noexcept { return frames_.begin(); }
  [[nodiscard]] auto end() const noexcept { return frames_.end(); }

  friend bool operator==(const FeatureSequence&, const FeatureSequence&) = default;

 private:
  std::vector<Feature> frames_;
};

/// SplitMix64 stream with a Box-Muller Gaussian transform.
///
/// Both pieces are fixed project-wide so that a given seed reproduces the
/// same draws bit-for-bit on every platform; std::normal_distribution gives
/// no such guarantee.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;
  double normal() noexcept;
  /// Vector of `n` independent standard normals.
  Vector normal_vector(std::size_t n);

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Finalizer of SplitMix64; a bijective 64-bit mixer.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x) noexcept;

/// Deterministic seed tree.
///
/// Derivation rule, with g = 0x9E3779B97F4A7C15 and separate domain tags:
///   trial(i)     = mix64(seed ^ kTrialTag  + mix64(i + g))
///   substream(s) = mix64(seed ^ kStreamTag + mix64(s + g))
///   frame(t)     = Rng(mix64(seed ^ kFrameTag + mix64(t + g)))
/// The same (seed, index) always produces the same child.
class SeedSpec {
 public:
  constexpr SeedSpec() = default;
  constexpr explicit SeedSpec(std::uint64_t master) : value_(master) {}

  [[nodiscard]] constexpr std::uint64_t value() const noexcept { return value_; }
  [[nodiscard]] SeedSpec trial(std::uint64_t index) const noexcept;
  [[nodiscard]] SeedSpec substream(std::uint64_t tag) const noexcept;
  [[nodiscard]] Rng frame(std::uint64_t t) const noexcept;
  /// A generator for draws that are not tied to a frame index.
  [[nodiscard]] Rng rng() const noexcept { return Rng(mix64(value_)); }

  friend constexpr bool operator==(SeedSpec, SeedSpec) = default;

 private:
  std::uint64_t value_ = 0;
};

/// Parameters of a driving signal a_t = base_t + beta * t * u, base_t ~ N(0, s^2 I).
struct MotionParams {
  std::size_t dim = 0;
  double noiseScale = 0.0;
  double driftRate = 0.0;
  /// Drift direction u; normalised on use. Empty means "no drift direction".
  Vector direction;

  /// Unit drift direction (zero vector when the direction is empty or zero).
  [[nodiscard]] Vector unit_direction() const;
};

class MotionSequence {
 public:
  MotionSequence() = default;
  MotionSequence(std::vector<Vector> inputs, Vector meanShift, double driftRate);

  /// Zero motion of dimension m and length T.
  static MotionSequence stationary(std::size_t m, std::size_t length);
  static MotionSequence sample(const MotionParams& params, std::size_t length, SeedSpec seed);

  [[nodiscard]] std::size_t size() const noexcept { return inputs_.size(); }
  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(meanShift_.size()); }
  /// a_t for 1-based frame index t.
  [[nodiscard]] const Vector& at_frame(std::size_t t) const { return inputs_.at(t - 1); }
  [[nodiscard]] const Vector& mean_shift() const noexcept { return meanShift_; }
  [[nodiscard]] double drift_rate() const noexcept { return driftRate_; }

 private:
  std::vector<Vector> inputs_;
  Vector meanShift_;
  double driftRate_ = 0.0;
};

/// Lag covariances of per-frame noise under the AR(1) family Γ_τ = ρ^τ Γ_0.
class LaggedCovarianceModel {
 public:
  static constexpr double kPsdTolerance = 1e-10;

  LaggedCovarianceModel(Matrix gamma0, double correlation);

  /// Γ_0 = (trace / d) I, so tr(Γ_0) = trace.
  static LaggedCovarianceModel isotropic(std::size_t d, double trace, double correlation);
  static LaggedCovarianceModel zero(std::size_t d);

  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(gamma0_.rows()); }
  [[nodiscard]] const Matrix& gamma0() const noexcept { return gamma0_; }
  [[nodiscard]] double correlation() const noexcept { return rho_; }
  [[nodiscard]] Matrix gamma(std::size_t lag) const;
  /// Square-root factor L with L L^T = Γ_0.
  [[nodiscard]] const Matrix& factor() const noexcept { return factor_; }
  [[nodiscard]] bool is_zero() const noexcept { return zero_; }

 private:
  Matrix gamma0_;
  Matrix factor_;
  double rho_;
  bool zero_;
};

/// True when `m` is symmetric and its smallest eigenvalue is >= -tol.
[[nodiscard]] bool is_symmetric_psd(const Matrix& m, double tol = LaggedCovarianceModel::kPsdTolerance);

/// Largest singular value.
[[nodiscard]] double spectral_norm(const Matrix& m);

/// Mean of the first `first_k` frames.
[[nodiscard]] Feature feature_mean(const FeatureSequence& seq, std::size_t first_k);

[[nodiscard]] double cosine_similarity(const Feature& a, const Feature& b);

}  // namespace ttsac
