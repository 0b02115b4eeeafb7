#include "ttsac/operators.hpp"

#include <cmath>
#include <string>

namespace ttsac {

namespace {

constexpr std::uint64_t kNoiseChannel = 1;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + " has dimension " + std::to_string(got) +
                                ", expected " + std::to_string(want));
  }
}

}  // namespace

AffineSystem::AffineSystem(Matrix a, Vector b, LaggedCovarianceModel noise, Vector drift)
    : a_(std::move(a)), b_(std::move(b)), noise_(std::move(noise)), drift_(std::move(drift)) {
  const auto d = static_cast<std::size_t>(b_.size());
  if (d == 0) {
    throw std::invalid_argument("affine system: dimension must be positive");
  }
  require_dim(static_cast<std::size_t>(a_.rows()), d, "A rows");
  require_dim(static_cast<std::size_t>(a_.cols()), d, "A cols");
  require_dim(noise_.dim(), d, "noise model");
  if (drift_.size() == 0) {
    drift_ = Vector::Zero(b_.size());
  }
  require_dim(static_cast<std::size_t>(drift_.size()), d, "drift");
  spectralNorm_ = ttsac::spectral_norm(a_);
}

AffineSystem::AffineSystem(Matrix a, Vector b, LaggedCovarianceModel noise)
    : AffineSystem(std::move(a), std::move(b), std::move(noise), Vector()) {}

Vector AffineSystem::fixed_point() const {
  const Matrix lhs = Matrix::Identity(a_.rows(), a_.cols()) - a_;
  Eigen::FullPivLU<Matrix> lu(lhs);
  if (!lu.isInvertible()) {
    throw DegenerateInputError("affine system: I - A is singular, no unique fixed point");
  }
  return lu.solve(b_);
}

NonlinearSystem::NonlinearSystem(Matrix w, double gain, Vector b, LaggedCovarianceModel noise)
    : w_(std::move(w)), gain_(gain), b_(std::move(b)), noise_(std::move(noise)) {
  const auto d = static_cast<std::size_t>(b_.size());
  if (d == 0) {
    throw std::invalid_argument("nonlinear system: dimension must be positive");
  }
  require_dim(static_cast<std::size_t>(w_.rows()), d, "W rows");
  require_dim(static_cast<std::size_t>(w_.cols()), d, "W cols");
  require_dim(noise_.dim(), d, "noise model");
  if (!(gain_ > 0.0 && gain_ < 1.0)) {
    throw std::invalid_argument("nonlinear system: gain must lie in (0, 1)");
  }
  wNorm_ = ttsac::spectral_norm(w_);
  if (wNorm_ > 1.0 + 1e-12) {
    throw std::invalid_argument("nonlinear system: ‖W‖₂ must not exceed 1");
  }
}

Vector NonlinearSystem::map(const Vector& f) const {
  return gain_ * (w_ * f).array().tanh().matrix() + b_;
}

LinearPipelineSystem::LinearPipelineSystem(Matrix render, Matrix coupling, Matrix encoder,
                                           LaggedCovarianceModel renderNoise)
    : render_(std::move(render)),
      coupling_(std::move(coupling)),
      encoder_(std::move(encoder)),
      renderNoise_(std::move(renderNoise)) {
  const auto p = static_cast<std::size_t>(render_.rows());
  const auto d = static_cast<std::size_t>(render_.cols());
  if (d == 0 || p < d) {
    throw std::invalid_argument("pipeline: render matrix must be p×d with p ≥ d ≥ 1");
  }
  require_dim(static_cast<std::size_t>(coupling_.rows()), p, "coupling rows");
  require_dim(static_cast<std::size_t>(encoder_.rows()), d, "encoder rows");
  require_dim(static_cast<std::size_t>(encoder_.cols()), p, "encoder cols");
  require_dim(renderNoise_.dim(), p, "render noise model");
  const Matrix qm = encoder_ * render_;
  const Matrix eye = Matrix::Identity(qm.rows(), qm.cols());
  if ((qm - eye).cwiseAbs().maxCoeff() > kLeftInverseTolerance) {
    throw std::invalid_argument("pipeline: encoder is not a left inverse of the render matrix");
  }
  motionResponse_ = encoder_ * coupling_;
}

LinearPipelineSystem LinearPipelineSystem::random(std::size_t d, std::size_t p, std::size_t m,
                                                  double couplingGain, LaggedCovarianceModel renderNoise,
                                                  SeedSpec seed) {
  if (d == 0 || p < d) {
    throw std::invalid_argument("pipeline: need p ≥ d ≥ 1");
  }
  const auto rows = static_cast<Eigen::Index>(p);
  const auto cols = static_cast<Eigen::Index>(d);
  const auto mdim = static_cast<Eigen::Index>(m);

  Rng rng = seed.substream(0).rng();
  Matrix g(rows, cols);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    g.data()[i] = rng.normal();
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix render = qr.householderQ() * Matrix::Identity(rows, cols);
  const Matrix encoder = render.transpose();

  Matrix visible(cols, mdim);
  Matrix hidden(rows, mdim);
  for (Eigen::Index i = 0; i < visible.size(); ++i) {
    visible.data()[i] = rng.normal();
  }
  for (Eigen::Index i = 0; i < hidden.size(); ++i) {
    hidden.data()[i] = rng.normal();
  }
  for (Eigen::Index j = 0; j < mdim; ++j) {
    visible.col(j) *= couplingGain / visible.col(j).norm();
  }
  const Matrix nullProjector = Matrix::Identity(rows, rows) - render * encoder;
  const Matrix coupling = render * visible + nullProjector * hidden;
  return LinearPipelineSystem(render, coupling, encoder, std::move(renderNoise));
}

std::size_t feature_dim(const System& system) {
  return std::visit([](const auto& s) { return s.dim(); }, system);
}

const char* family_name(const System& system) {
  return std::visit(overloaded{
                        [](const AffineSystem&) { return "affine"; },
                        [](const NonlinearSystem&) { return "nonlinear"; },
                        [](const LinearPipelineSystem&) { return "linear-pipeline"; },
                    },
                    system);
}

std::vector<Vector> sample_ar1(const LaggedCovarianceModel& model, std::size_t length, SeedSpec seed) {
  const auto d = static_cast<Eigen::Index>(model.dim());
  std::vector<Vector> eps;
  eps.reserve(length);
  if (model.is_zero()) {
    eps.assign(length, Vector::Zero(d));
    return eps;
  }
  const double rho = model.correlation();
  const double innovation = std::sqrt(1.0 - rho * rho);
  for (std::size_t t = 1; t <= length; ++t) {
    Rng rng = seed.frame(t);
    Vector shock = model.factor() * rng.normal_vector(model.dim());
    if (t == 1) {
      eps.push_back(std::move(shock));
    } else {
      eps.push_back(rho * eps.back() + innovation * shock);
    }
  }
  return eps;
}

FeatureSequence generate_sequence(const System& system, const Feature& f, const MotionSequence& motion,
                                  std::size_t length, SeedSpec seed) {
  if (length == 0) {
    throw std::invalid_argument("generate_sequence: length must be at least 1");
  }
  require_dim(f.dim(), feature_dim(system), "conditioning feature");
  const SeedSpec noiseSeed = seed.substream(kNoiseChannel);
  std::vector<Feature> frames;
  frames.reserve(length);

  std::visit(overloaded{
                 [&](const AffineSystem& s) {
                   const Vector base = s.a() * f.values() + s.b();
                   const auto eps = sample_ar1(s.noise(), length, noiseSeed);
                   for (std::size_t t = 1; t <= length; ++t) {
                     frames.emplace_back(base + static_cast<double>(t) * s.drift() + eps[t - 1]);
                   }
                 },
                 [&](const NonlinearSystem& s) {
                   const Vector base = s.map(f.values());
                   const auto eps = sample_ar1(s.noise(), length, noiseSeed);
                   for (std::size_t t = 1; t <= length; ++t) {
                     frames.emplace_back(base + eps[t - 1]);
                   }
                 },
                 [&](const LinearPipelineSystem& s) {
                   if (motion.size() < length) {
                     throw std::invalid_argument("generate_sequence: motion sequence has " +
                                                 std::to_string(motion.size()) + " inputs, need " +
                                                 std::to_string(length));
                   }
                   require_dim(motion.dim(), s.motion_dim(), "motion input");
                   const auto eta = sample_ar1(s.render_noise(), length, noiseSeed);
                   for (std::size_t t = 1; t <= length; ++t) {
                     const Vector rendered = s.render() * f.values() + s.coupling() * motion.at_frame(t) + eta[t - 1];
                     frames.emplace_back(s.encoder() * rendered);
                   }
                 },
             },
             system);
  return FeatureSequence(std::move(frames));
}

Vector expected_frame(const System& system, const Vector& f, const MotionParams& motion, std::size_t t) {
  require_dim(static_cast<std::size_t>(f.size()), feature_dim(system), "conditioning feature");
  const double time = static_cast<double>(t);
  return std::visit(overloaded{
                        [&](const AffineSystem& s) -> Vector { return s.a() * f + s.b() + time * s.drift(); },
                        [&](const NonlinearSystem& s) -> Vector { return s.map(f); },
                        [&](const LinearPipelineSystem& s) -> Vector {
                          require_dim(motion.dim, s.motion_dim(), "motion parameters");
                          return f + s.motion_response() * (motion.driftRate * time * motion.unit_direction());
                        },
                    },
                    system);
}

Feature apply_T(const System& system, const Feature& f, const MotionParams& motion, std::size_t horizon) {
  if (horizon == 0) {
    throw std::invalid_argument("apply_T: horizon must be at least 1");
  }
  if (std::holds_alternative<NonlinearSystem>(system)) {
    throw UnsupportedOperationError("apply_T: no closed form for the nonlinear family; use mc_estimate_T");
  }
  // Drift is linear in t, so its mean over t = 1..T sits at (T + 1) / 2.
  const auto midpoint = static_cast<double>(horizon + 1) / 2.0;
  const Vector atOne = expected_frame(system, f.values(), motion, 1);
  const Vector slope = expected_frame(system, f.values(), motion, 2) - atOne;
  return Feature(atOne + (midpoint - 1.0) * slope);
}

double lipschitz_constant(const System& system) {
  return std::visit(overloaded{
                        [](const AffineSystem& s) { return s.spectral_norm(); },
                        [](const NonlinearSystem& s) { return s.gain() * s.w_norm(); },
                        [](const LinearPipelineSystem& s) { return spectral_norm(s.render()); },
                    },
                    system);
}

Vector generator_output(const System& system, const Vector& f) {
  require_dim(static_cast<std::size_t>(f.size()), feature_dim(system), "feature");
  return std::visit(overloaded{
                        [&](const AffineSystem& s) -> Vector { return s.a() * f + s.b(); },
                        [&](const NonlinearSystem& s) -> Vector { return s.map(f); },
                        [&](const LinearPipelineSystem& s) -> Vector { return s.render() * f; },
                    },
                    system);
}

Matrix generator_jacobian(const System& system, const Vector& f) {
  require_dim(static_cast<std::size_t>(f.size()), feature_dim(system), "feature");
  return std::visit(overloaded{
                        [&](const AffineSystem& s) -> Matrix { return s.a(); },
                        [&](const NonlinearSystem& s) -> Matrix {
                          const Vector slope = 1.0 - (s.w() * f).array().tanh().square();
                          return s.gain() * slope.asDiagonal() * s.w();
                        },
                        [&](const LinearPipelineSystem& s) -> Matrix { return s.render(); },
                    },
                    system);
}

std::vector<LaggedCovarianceModel> feature_noise_components(const System& system, const MotionParams& motion) {
  return std::visit(overloaded{
                        [](const AffineSystem& s) { return std::vector<LaggedCovarianceModel>{s.noise()}; },
                        [](const NonlinearSystem& s) { return std::vector<LaggedCovarianceModel>{s.noise()}; },
                        [&](const LinearPipelineSystem& s) {
                          const Matrix& q = s.encoder();
                          Matrix renderPart = q * s.render_noise().gamma0() * q.transpose();
                          renderPart = 0.5 * (renderPart + renderPart.transpose()).eval();
                          std::vector<LaggedCovarianceModel> parts{
                              LaggedCovarianceModel(renderPart, s.render_noise().correlation())};
                          if (motion.noiseScale > 0.0) {
                            require_dim(motion.dim, s.motion_dim(), "motion parameters");
                            const Matrix& qp = s.motion_response();
                            Matrix motionPart = motion.noiseScale * motion.noiseScale * qp * qp.transpose();
                            motionPart = 0.5 * (motionPart + motionPart.transpose()).eval();
                            parts.emplace_back(motionPart, 0.0);
                          }
                          return parts;
                        },
                    },
                    system);
}

}  // namespace ttsac
