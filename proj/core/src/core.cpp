#include "ttsac/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ttsac {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kTrialTag = 0x747269616C000001ULL;
constexpr std::uint64_t kStreamTag = 0x73747265616D0002ULL;
constexpr std::uint64_t kFrameTag = 0x6672616D65000003ULL;

std::uint64_t derive(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) noexcept {
  return mix64((seed ^ tag) + mix64(index + kGolden));
}

void require_finite(const Vector& v) {
  if (v.size() == 0) {
    throw std::invalid_argument("feature dimension must be positive");
  }
  if (!v.allFinite()) {
    throw std::invalid_argument("feature entries must be finite");
  }
}

}  // namespace

Feature::Feature(Vector values) : values_(std::move(values)) { require_finite(values_); }

Feature::Feature(std::initializer_list<double> values)
    : values_(Eigen::Map<const Vector>(values.begin(), static_cast<Eigen::Index>(values.size()))) {
  require_finite(values_);
}

FeatureSequence::FeatureSequence(std::vector<Feature> frames) {
  frames_.reserve(frames.size());
  for (auto& f : frames) {
    push_back(std::move(f));
  }
}

void FeatureSequence::push_back(Feature frame) {
  if (!frames_.empty() && frame.dim() != frames_.front().dim()) {
    throw std::invalid_argument("frame dimension " + std::to_string(frame.dim()) +
                                " does not match sequence dimension " +
                                std::to_string(frames_.front().dim()));
  }
  frames_.push_back(std::move(frame));
}

std::size_t FeatureSequence::dim() const {
  if (frames_.empty()) {
    throw std::invalid_argument("empty feature sequence has no dimension");
  }
  return frames_.front().dim();
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t Rng::next_u64() noexcept {
  state_ += kGolden;
  return mix64(state_);
}

double Rng::uniform() noexcept {
  // 53 random mantissa bits, shifted by half an ulp so 0 is never returned.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() noexcept {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

Vector Rng::normal_vector(std::size_t n) {
  Vector z(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    z(i) = normal();
  }
  return z;
}

SeedSpec SeedSpec::trial(std::uint64_t index) const noexcept {
  return SeedSpec(derive(value_, kTrialTag, index));
}

SeedSpec SeedSpec::substream(std::uint64_t tag) const noexcept {
  return SeedSpec(derive(value_, kStreamTag, tag));
}

Rng SeedSpec::frame(std::uint64_t t) const noexcept { return Rng(derive(value_, kFrameTag, t)); }

Vector MotionParams::unit_direction() const {
  Vector u = Vector::Zero(static_cast<Eigen::Index>(dim));
  if (direction.size() == 0) {
    return u;
  }
  if (static_cast<std::size_t>(direction.size()) != dim) {
    throw std::invalid_argument("motion direction has dimension " + std::to_string(direction.size()) +
                                ", expected " + std::to_string(dim));
  }
  const double norm = direction.norm();
  if (norm == 0.0) {
    return u;
  }
  return direction / norm;
}

MotionSequence::MotionSequence(std::vector<Vector> inputs, Vector meanShift, double driftRate)
    : inputs_(std::move(inputs)), meanShift_(std::move(meanShift)), driftRate_(driftRate) {
  for (const auto& a : inputs_) {
    if (a.size() != meanShift_.size()) {
      throw std::invalid_argument("motion input dimension does not match mean shift dimension");
    }
  }
}

MotionSequence MotionSequence::stationary(std::size_t m, std::size_t length) {
  const auto dim = static_cast<Eigen::Index>(m);
  return MotionSequence(std::vector<Vector>(length, Vector::Zero(dim)), Vector::Zero(dim), 0.0);
}

MotionSequence MotionSequence::sample(const MotionParams& params, std::size_t length, SeedSpec seed) {
  if (params.noiseScale < 0.0) {
    throw std::invalid_argument("motion noise scale must be non-negative");
  }
  const Vector u = params.unit_direction();
  std::vector<Vector> inputs;
  inputs.reserve(length);
  for (std::size_t t = 1; t <= length; ++t) {
    Vector a = params.driftRate * static_cast<double>(t) * u;
    if (params.noiseScale > 0.0) {
      Rng rng = seed.frame(t);
      a += params.noiseScale * rng.normal_vector(params.dim);
    }
    inputs.push_back(std::move(a));
  }
  return MotionSequence(std::move(inputs), u, params.driftRate);
}

LaggedCovarianceModel::LaggedCovarianceModel(Matrix gamma0, double correlation)
    : gamma0_(std::move(gamma0)), rho_(correlation) {
  if (gamma0_.rows() == 0 || gamma0_.rows() != gamma0_.cols()) {
    throw std::invalid_argument("Γ_0 must be a non-empty square matrix");
  }
  if (!(rho_ >= 0.0 && rho_ < 1.0)) {
    throw std::invalid_argument("correlation rho must lie in [0, 1), got " + std::to_string(rho_));
  }
  if (!gamma0_.allFinite()) {
    throw std::invalid_argument("Γ_0 entries must be finite");
  }
  if (!is_symmetric_psd(gamma0_)) {
    throw std::invalid_argument("Γ_0 must be symmetric positive semidefinite");
  }
  zero_ = gamma0_.isZero(0.0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gamma0_);
  const Vector roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  factor_ = eig.eigenvectors() * roots.asDiagonal();
}

LaggedCovarianceModel LaggedCovarianceModel::isotropic(std::size_t d, double trace, double correlation) {
  if (d == 0) {
    throw std::invalid_argument("dimension must be positive");
  }
  if (trace < 0.0) {
    throw std::invalid_argument("noise variance must be non-negative");
  }
  const auto n = static_cast<Eigen::Index>(d);
  return LaggedCovarianceModel(Matrix::Identity(n, n) * (trace / static_cast<double>(d)), correlation);
}

LaggedCovarianceModel LaggedCovarianceModel::zero(std::size_t d) { return isotropic(d, 0.0, 0.0); }

Matrix LaggedCovarianceModel::gamma(std::size_t lag) const {
  return std::pow(rho_, static_cast<double>(lag)) * gamma0_;
}

bool is_symmetric_psd(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) {
    return false;
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (!(m - m.transpose()).isZero(tol * scale)) {
    return false;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() >= -tol * scale;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) {
    return 0.0;
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Feature feature_mean(const FeatureSequence& seq, std::size_t first_k) {
  if (first_k == 0 || first_k > seq.size()) {
    throw std::invalid_argument("feature_mean: first_k=" + std::to_string(first_k) +
                                " must be in [1, " + std::to_string(seq.size()) + "]");
  }
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(seq.dim()));
  for (std::size_t t = 0; t < first_k; ++t) {
    sum += seq[t].values();
  }
  return Feature(sum / static_cast<double>(first_k));
}

double cosine_similarity(const Feature& a, const Feature& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("cosine_similarity: dimension mismatch");
  }
  const double na = a.values().norm();
  const double nb = b.values().norm();
  if (na == 0.0 || nb == 0.0) {
    throw DegenerateInputError("cosine_similarity: zero vector has no direction");
  }
  return std::clamp(a.values().dot(b.values()) / (na * nb), -1.0, 1.0);
}

}  // namespace ttsac
