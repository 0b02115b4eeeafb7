#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "ttsac/core.hpp"

namespace ttsac {

/// Affine generator-encoder composition.
///
/// Frame t encodes to A f + b + δ·t + ε_t with ε an AR(1) process. Motion
/// enters only through the drift δ; the motion sequence itself is ignored.
class AffineSystem {
 public:
  AffineSystem(Matrix a, Vector b, LaggedCovarianceModel noise, Vector drift);
  /// Zero-drift convenience constructor.
  AffineSystem(Matrix a, Vector b, LaggedCovarianceModel noise);

  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(b_.size()); }
  [[nodiscard]] const Matrix& a() const noexcept { return a_; }
  [[nodiscard]] const Vector& b() const noexcept { return b_; }
  [[nodiscard]] const LaggedCovarianceModel& noise() const noexcept { return noise_; }
  [[nodiscard]] const Vector& drift() const noexcept { return drift_; }
  [[nodiscard]] double spectral_norm() const noexcept { return spectralNorm_; }
  [[nodiscard]] bool contractive() const noexcept { return spectralNorm_ < 1.0; }
  /// (I - A)^{-1} b; throws DegenerateInputError when I - A is singular.
  [[nodiscard]] Vector fixed_point() const;

 private:
  Matrix a_;
  Vector b_;
  LaggedCovarianceModel noise_;
  Vector drift_;
  double spectralNorm_;
};

/// f ↦ c·tanh(W f) + b with ‖W‖₂ ≤ 1 and c ∈ (0, 1); additive AR(1) noise.
class NonlinearSystem {
 public:
  NonlinearSystem(Matrix w, double gain, Vector b, LaggedCovarianceModel noise);

  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(b_.size()); }
  [[nodiscard]] const Matrix& w() const noexcept { return w_; }
  [[nodiscard]] double gain() const noexcept { return gain_; }
  [[nodiscard]] const Vector& b() const noexcept { return b_; }
  [[nodiscard]] const LaggedCovarianceModel& noise() const noexcept { return noise_; }
  [[nodiscard]] double w_norm() const noexcept { return wNorm_; }

  [[nodiscard]] Vector map(const Vector& f) const;

 private:
  Matrix w_;
  double gain_;
  Vector b_;
  LaggedCovarianceModel noise_;
  double wNorm_;
};

/// Toy render/encode pipeline: G(f, a) = M f + P a + η, E(x) = Q x, Q M = I.
///
/// Encoded frame t is exactly f + Q P a_t + Q η_t.
class LinearPipelineSystem {
 public:
  static constexpr double kLeftInverseTolerance = 1e-10;

  LinearPipelineSystem(Matrix render, Matrix coupling, Matrix encoder, LaggedCovarianceModel renderNoise);

  /// Seeded construction. M is the thin Q factor of a p×d Gaussian matrix,
  /// the encoder is Mᵀ, and the coupling is built so that every column of
  /// Q P has Euclidean norm `couplingGain` while P also leaks into the
  /// encoder's null space.
  static LinearPipelineSystem random(std::size_t d, std::size_t p, std::size_t m, double couplingGain,
                                     LaggedCovarianceModel renderNoise, SeedSpec seed);

  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(render_.cols()); }
  [[nodiscard]] std::size_t render_dim() const noexcept { return static_cast<std::size_t>(render_.rows()); }
  [[nodiscard]] std::size_t motion_dim() const noexcept { return static_cast<std::size_t>(coupling_.cols()); }
  [[nodiscard]] const Matrix& render() const noexcept { return render_; }
  [[nodiscard]] const Matrix& coupling() const noexcept { return coupling_; }
  [[nodiscard]] const Matrix& encoder() const noexcept { return encoder_; }
  [[nodiscard]] const LaggedCovarianceModel& render_noise() const noexcept { return renderNoise_; }
  /// Q P, the feature-space response to a unit motion input.
  [[nodiscard]] const Matrix& motion_response() const noexcept { return motionResponse_; }

 private:
  Matrix render_;
  Matrix coupling_;
  Matrix encoder_;
  LaggedCovarianceModel renderNoise_;
  Matrix motionResponse_;
};

using System = std::variant<AffineSystem, NonlinearSystem, LinearPipelineSystem>;

[[nodiscard]] std::size_t feature_dim(const System& system);
[[nodiscard]] const char* family_name(const System& system);

/// AR(1) noise draws ε_1..ε_T for Γ_τ = ρ^τ Γ_0, one sub-stream per frame.
[[nodiscard]] std::vector<Vector> sample_ar1(const LaggedCovarianceModel& model, std::size_t length,
                                             SeedSpec seed);

/// Encoded frames (E∘G)(f, A)_t for t = 1..T.
[[nodiscard]] FeatureSequence generate_sequence(const System& system, const Feature& f,
                                                const MotionSequence& motion, std::size_t length,
                                                SeedSpec seed);

/// E[(E∘G)(f, A)_t] for a single 1-based frame t, over noise and motion.
[[nodiscard]] Vector expected_frame(const System& system, const Vector& f, const MotionParams& motion,
                                    std::size_t t);

/// Closed-form conditioning operator T(f): the expected encoded frame
/// averaged over t = 1..horizon. Not available for NonlinearSystem.
[[nodiscard]] Feature apply_T(const System& system, const Feature& f, const MotionParams& motion,
                              std::size_t horizon);

/// Lipschitz constant of the feature-to-output map G.
[[nodiscard]] double lipschitz_constant(const System& system);

/// The noise-free generator output G(f) used by the variance analyses:
/// A f + b (affine), c·tanh(W f) + b (nonlinear), M f (pipeline).
[[nodiscard]] Vector generator_output(const System& system, const Vector& f);

/// Jacobian of generator_output at f.
[[nodiscard]] Matrix generator_jacobian(const System& system, const Vector& f);

/// Feature-space noise as a list of independent AR(1) components whose
/// lagged covariances add. The pipeline contributes Q Γ_0 Qᵀ from render
/// noise plus s² (Q P)(Q P)ᵀ with ρ = 0 from motion noise.
[[nodiscard]] std::vector<LaggedCovarianceModel> feature_noise_components(const System& system,
                                                                          const MotionParams& motion);

}  // namespace ttsac
