#include <gtest/gtest.h>

#include <cmath>

#include "ttsac/analytics.hpp"

namespace ttsac {
namespace {

// Independent oracle: (1/K²) Σ_i Σ_j ρ^|i−j| Γ_0.
Matrix double_sum(const Matrix& g0, double rho, std::size_t K) {
  double s = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = 0; j < K; ++j) {
      s += std::pow(rho, std::abs(static_cast<double>(i) - static_cast<double>(j)));
    }
  }
  return (s / static_cast<double>(K * K)) * g0;
}

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

TEST(AggregatedCovariance, MatchesDoubleSumOracle) {
  Matrix g0(3, 3);
  g0 << 2.0, 0.4, -0.1, 0.4, 1.0, 0.2, -0.1, 0.2, 0.5;
  for (double rho : {0.0, 0.3, 0.5, 0.9}) {
    const LaggedCovarianceModel model(g0, rho);
    for (std::size_t K = 1; K <= 32; ++K) {
      const Matrix diff = aggregated_covariance(model, K) - double_sum(g0, rho, K);
      EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-12) << "rho=" << rho << " K=" << K;
    }
  }
}

TEST(AggregatedCovariance, ScalarHandCase) {
  const LaggedCovarianceModel model(scalar(1.0), 0.5);
  EXPECT_NEAR(aggregated_covariance(model, 3)(0, 0), 11.0 / 18.0, 1e-15);
}

TEST(AggregatedCovariance, UncorrelatedNoiseScalesAsOneOverK) {
  Matrix g0(2, 2);
  g0 << 1.5, 0.3, 0.3, 0.7;
  const LaggedCovarianceModel model(g0, 0.0);
  for (std::size_t K = 1; K <= 20; ++K) {
    EXPECT_EQ(aggregated_covariance(model, K), g0 / static_cast<double>(K));
  }
}

TEST(AggregatedCovariance, PsdAndNonIncreasingTrace) {
  Rng rng(2);
  for (double rho : {0.0, 0.5, 0.95}) {
    Matrix g(4, 4);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      g.data()[i] = rng.normal();
    }
    const LaggedCovarianceModel model(g * g.transpose(), rho);
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t K = 1; K <= 24; ++K) {
      const Matrix c = aggregated_covariance(model, K);
      EXPECT_TRUE(is_symmetric_psd(c));
      EXPECT_LE(c.trace(), previous * (1.0 + 1e-12));
      previous = c.trace();
    }
  }
}

TEST(AggregatedCovariance, NoiselessSystemIsZero) {
  const System s = AffineSystem(0.5 * Matrix::Identity(2, 2), Vector::Zero(2), LaggedCovarianceModel::zero(2));
  EXPECT_EQ(aggregated_covariance(s, {}, 5), Matrix::Zero(2, 2));
}

TEST(EmpiricalCovariance, ScalarCasesWithinChiSquareBand) {
  const std::size_t M = 50000;
  const System white = AffineSystem(scalar(0.5), Vector::Zero(1), LaggedCovarianceModel(scalar(1.0), 0.0));
  EXPECT_NEAR(empirical_aggregated_covariance(white, Feature{0.0}, 4, {}, M, SeedSpec(1))(0, 0), 0.25, 0.01);
  const System ar = AffineSystem(scalar(0.5), Vector::Zero(1), LaggedCovarianceModel(scalar(1.0), 0.5));
  EXPECT_NEAR(empirical_aggregated_covariance(ar, Feature{0.0}, 3, {}, M, SeedSpec(2))(0, 0), 11.0 / 18.0, 0.025);
}

TEST(EmpiricalCovariance, PrefixesAgreeWithSingleK) {
  const System s = AffineSystem(scalar(0.5), Vector::Zero(1), LaggedCovarianceModel(scalar(1.0), 0.5));
  const auto prefixes = empirical_aggregated_covariance_prefixes(s, Feature{0.0}, 5, {}, 500, SeedSpec(3));
  ASSERT_EQ(prefixes.size(), 5u);
  EXPECT_EQ(prefixes.back(), empirical_aggregated_covariance(s, Feature{0.0}, 5, {}, 500, SeedSpec(3)));
}

TEST(OutputVarianceBound, AffineHandCase) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 0.5;
  const System s = AffineSystem(a, Vector::Zero(2), LaggedCovarianceModel::zero(2));
  const auto r = output_variance_bound(s, Vector::Zero(2), Matrix::Identity(2, 2), 20000, SeedSpec(4));
  ASSERT_TRUE(r.exact.has_value());
  EXPECT_NEAR(*r.exact, 4.25, 1e-14);
  EXPECT_NEAR(r.bound, 8.0, 1e-13);
  EXPECT_LE(r.empirical, r.bound);
  EXPECT_NEAR(r.empirical, 4.25, 3.0 * r.standardError);
}

TEST(OutputVarianceBound, ConstantGeneratorAndZeroCovariance) {
  const System flat = AffineSystem(Matrix::Zero(2, 2), Vector::Ones(2), LaggedCovarianceModel::zero(2));
  const auto r0 = output_variance_bound(flat, Vector::Zero(2), Matrix::Identity(2, 2), 100, SeedSpec(5));
  EXPECT_EQ(r0.bound, 0.0);
  EXPECT_EQ(r0.empirical, 0.0);
  const System s = AffineSystem(0.5 * Matrix::Identity(2, 2), Vector::Ones(2), LaggedCovarianceModel::zero(2));
  const auto r1 = output_variance_bound(s, Vector::Ones(2), Matrix::Zero(2, 2), 100, SeedSpec(5));
  EXPECT_EQ(r1.bound, 0.0);
  EXPECT_EQ(r1.empirical, 0.0);
}

TEST(ContractionFit, GeometricSequenceRecoversRate) {
  const System s = AffineSystem(0.5 * Matrix::Identity(2, 2), Vector::Unit(2, 0), LaggedCovarianceModel::zero(2));
  const auto [state, trace] = refine(s, ConditioningState(Feature{0.0, 0.0}), {.K = 1, .passes = 5},
                                     MotionSequence::stationary(0, 1), SeedSpec(1));
  ASSERT_EQ(trace.iterates.size(), 6u);
  // Oracle: iterate k is 2 (1 − 0.5^k).
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_NEAR(trace.iterates[k].identity()[0], 2.0 * (1.0 - std::pow(0.5, static_cast<double>(k))), 1e-15);
  }
  const auto fit = estimate_contraction_rate(trace, Feature{2.0, 0.0});
  EXPECT_NEAR(fit.rate, 0.5, 1e-9);
  EXPECT_FALSE(fit.converged);
}

TEST(ContractionFit, StartingAtTheFixedPointIsConverged) {
  const System s = AffineSystem(0.5 * Matrix::Identity(2, 2), Vector::Unit(2, 0), LaggedCovarianceModel::zero(2));
  const auto [state, trace] = refine(s, ConditioningState(Feature{2.0, 0.0}), {.K = 1, .passes = 3},
                                     MotionSequence::stationary(0, 1), SeedSpec(1));
  const auto fit = estimate_contraction_rate(trace, Feature{2.0, 0.0});
  EXPECT_TRUE(fit.converged);
  EXPECT_EQ(fit.rate, 0.0);
}

TEST(ContractionFit, NonlinearRateStaysUnderTheCertificate) {
  Rng rng(9);
  Matrix w(4, 4);
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    w.data()[i] = rng.normal();
  }
  w *= 0.9 / spectral_norm(w);
  const NonlinearSystem nl(w, 0.8, Vector::Constant(4, 0.3), LaggedCovarianceModel::zero(4));
  Vector fStar = Vector::Zero(4);
  for (int i = 0; i < 2000; ++i) {
    fStar = nl.map(fStar);
  }
  const auto [state, trace] = refine(System(nl), ConditioningState(Feature(Vector::Constant(4, 3.0))),
                                     {.K = 1, .passes = 8}, MotionSequence::stationary(0, 1), SeedSpec(1));
  EXPECT_LE(estimate_contraction_rate(trace, Feature(fStar)).rate, 0.72 + 0.02);
}

TEST(Decompose, HandCase) {
  Vector offset(2);
  offset << 0.3, 0.0;
  const auto r = decompose(Matrix::Identity(2, 2), offset, 0.1 * Matrix::Identity(2, 2));
  EXPECT_NEAR(r.biasSq, 0.09, 1e-12);
  EXPECT_NEAR(r.variance, 0.2, 1e-12);
  EXPECT_NEAR(r.total, 0.29, 1e-12);
}

TEST(BiasVariance, HandCaseAgreesWithSimulation) {
  // A = I and δ = (0.2, 0): μ_K − μ = δ (K − 1) / 2 = (0.3, 0) at K = 4.
  // Γ_0 = 0.4 I with ρ = 0 gives Cov(f̄) = 0.1 I.
  Vector drift(2);
  drift << 0.2, 0.0;
  const System s =
      AffineSystem(Matrix::Identity(2, 2), Vector::Zero(2), LaggedCovarianceModel::isotropic(2, 0.8, 0.0), drift);
  const auto r = bias_variance_decompose(s, Feature{1.0, -1.0}, 4, {}, 20000, SeedSpec(6));
  EXPECT_NEAR(r.biasSq, 0.09, 1e-12);
  EXPECT_NEAR(r.variance, 0.2, 1e-12);
  ASSERT_TRUE(r.empiricalTotal.has_value());
  EXPECT_NEAR(r.empiricalTotal->mean, r.total, 3.0 * r.empiricalTotal->standardError);
}

TEST(BiasVariance, ZeroDriftIsPureVariance) {
  const System s =
      AffineSystem(0.5 * Matrix::Identity(2, 2), Vector::Zero(2), LaggedCovarianceModel::isotropic(2, 1.0, 0.5));
  const auto r = bias_variance_decompose(s, Feature{0.0, 0.0}, 3, {}, 0, SeedSpec(1));
  EXPECT_EQ(r.biasSq, 0.0);
  EXPECT_EQ(r.total, r.variance);
  const auto r1 = bias_variance_decompose(s, Feature{0.0, 0.0}, 1, {}, 0, SeedSpec(1));
  // K = 1: tr(A Γ_0 Aᵀ) = 0.25 · 1.
  EXPECT_NEAR(r1.total, 0.25, 1e-15);
}

TEST(OptimalK, HandComputedObjective) {
  const auto curve = optimal_k(1.0, [](std::size_t k) { return 0.1 * static_cast<double>(k - 1); }, 6);
  const std::vector<double> expected{1.0, 0.51, 1.0 / 3.0 + 0.04, 0.34, 0.36, 1.0 / 6.0 + 0.25};
  ASSERT_EQ(curve.objective.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(curve.objective[i], expected[i], 1e-12);
  }
  EXPECT_EQ(curve.kStar, 4u);
}

TEST(OptimalK, ZeroBiasAndZeroVarianceEdgeCases) {
  EXPECT_EQ(optimal_k(1.0, [](std::size_t) { return 0.0; }, 12).kStar, 12u);
  EXPECT_EQ(optimal_k(0.0, [](std::size_t) { return 0.0; }, 12).kStar, 1u);
  EXPECT_EQ(optimal_k(1.0, [](std::size_t) { return 0.0; }, 1).kStar, 1u);
}

TEST(ArgMin, TiesGoToTheSmallerIndex) {
  const std::vector<double> v{3.0, 1.0, 1.0, 2.0};
  EXPECT_EQ(argmin_1based(v), 2u);
}

TEST(KSweep, ZeroDriftPrefersTheLargestK) {
  const System s =
      AffineSystem(0.5 * Matrix::Identity(2, 2), Vector::Zero(2), LaggedCovarianceModel::isotropic(2, 1.0, 0.0));
  const auto sweep = k_sweep(s, Feature{0.0, 0.0}, {}, 8, 4000, SeedSpec(1));
  ASSERT_EQ(sweep.perK.size(), 8u);
  EXPECT_EQ(sweep.kStarAnalytic, 8u);
  const auto single = k_sweep(s, Feature{0.0, 0.0}, {}, 1, 100, SeedSpec(1));
  EXPECT_EQ(single.perK.size(), 1u);
  EXPECT_EQ(single.kStarAnalytic, 1u);
  EXPECT_EQ(single.kStarEmpirical, 1u);
}

}  // namespace
}  // namespace ttsac
