#include <gtest/gtest.h>

#include <cmath>

#include "ttsac/adaptation.hpp"

namespace ttsac {
namespace {

System half_system(double noiseTrace = 0.0, double rho = 0.0) {
  const auto noise = noiseTrace > 0.0 ? LaggedCovarianceModel::isotropic(2, noiseTrace, rho)
                                      : LaggedCovarianceModel::zero(2);
  return AffineSystem(0.5 * Matrix::Identity(2, 2), Vector::Unit(2, 0), noise);
}

TEST(McEstimate, NoiselessIdentitySystemReturnsTheFeature) {
  const System s = AffineSystem(Matrix::Identity(2, 2), Vector::Zero(2), LaggedCovarianceModel::zero(2));
  for (std::size_t k : {1u, 3u, 9u}) {
    EXPECT_EQ(mc_estimate_T(s, Feature{3.0, 1.0}, k, MotionSequence::stationary(0, k), SeedSpec(1)),
              (Feature{3.0, 1.0}));
  }
}

TEST(McEstimate, KEqualsOneIsTheFirstFrame) {
  const System s = half_system(1.0, 0.5);
  const Feature f{0.2, -0.4};
  const auto motion = MotionSequence::stationary(0, 1);
  const Feature est = mc_estimate_T(s, f, 1, motion, SeedSpec(12));
  const auto seq = generate_sequence(s, f, motion, 1, SeedSpec(12));
  EXPECT_EQ(est, seq[0]);
}

TEST(McEstimate, UnbiasedOverIndependentSeeds) {
  // Per-frame noise sd 0.1 per axis, rho = 0: entrywise sd of the K-mean is 0.1 / sqrt(K).
  const System s = half_system(2 * 0.01, 0.0);
  const std::size_t K = 4;
  const std::size_t M = 10000;
  const Feature f{0.0, 0.0};
  const auto motion = MotionSequence::stationary(0, K);
  Vector sum = Vector::Zero(2);
  for (std::size_t i = 0; i < M; ++i) {
    sum += mc_estimate_T(s, f, K, motion, SeedSpec(3).trial(i)).values();
  }
  const Vector mean = sum / static_cast<double>(M);
  const Vector expected = apply_T(s, f, {}, K).values();
  const double tol = 3.0 * 0.1 / std::sqrt(static_cast<double>(K * M));
  EXPECT_NEAR(mean(0), expected(0), tol);
  EXPECT_NEAR(mean(1), expected(1), tol);
}

TEST(Refine, HandIteratedAffineSequence) {
  const AdaptationConfig cfg{.K = 2, .passes = 3};
  const auto [state, trace] =
      refine(half_system(), ConditioningState(Feature{0.0, 0.0}), cfg, MotionSequence::stationary(0, 2), SeedSpec(1));
  const std::vector<Feature> expected{{0.0, 0.0}, {1.0, 0.0}, {1.5, 0.0}, {1.75, 0.0}};
  ASSERT_EQ(trace.iterates.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(trace.iterates[k].identity(), expected[k]);
  }
  EXPECT_EQ(state.identity(), (Feature{1.75, 0.0}));
}

TEST(Refine, ResidualsShrinkByTheSpectralNorm) {
  const AdaptationConfig cfg{.K = 3, .passes = 6};
  const auto [state, trace] =
      refine(half_system(), ConditioningState(Feature{-1.0, 4.0}), cfg, MotionSequence::stationary(0, 3), SeedSpec(1));
  ASSERT_EQ(trace.residuals.size(), 7u);
  for (std::size_t k = 1; k < trace.residuals.size(); ++k) {
    EXPECT_NEAR(trace.residuals[k] / trace.residuals[k - 1], 0.5, 1e-9);
  }
}

TEST(Refine, FixedPointIsLeftUnchanged) {
  const AdaptationConfig cfg{.K = 2, .passes = 2};
  const auto [state, trace] =
      refine(half_system(), ConditioningState(Feature{2.0, 0.0}), cfg, MotionSequence::stationary(0, 2), SeedSpec(1));
  EXPECT_EQ(state.identity(), (Feature{2.0, 0.0}));
  for (double r : trace.residuals) {
    EXPECT_EQ(r, 0.0);
  }
}

TEST(Refine, UnlistedStreamIsBitIdentical) {
  ConditioningState state(Feature{0.0, 0.0});
  const Feature motionFeature{0.123456789, -9.87654321, 3.0};
  state.set(kMotionStream, motionFeature);
  const StreamSystems systems{
      {kIdentityStream, half_system(1.0, 0.5)},
      {kMotionStream, AffineSystem(0.1 * Matrix::Identity(3, 3), Vector::Ones(3),
                                   LaggedCovarianceModel::isotropic(3, 1.0, 0.0))},
  };
  const AdaptationConfig cfg{.K = 4, .passes = 2, .streams = {kIdentityStream}};
  const auto [after, trace] = refine(systems, state, cfg, MotionSequence::stationary(0, 4), SeedSpec(8));
  EXPECT_EQ(after.at(kMotionStream), motionFeature);
  EXPECT_NE(after.identity(), state.identity());
}

TEST(Refine, ListedStreamsDoNotCrossCouple) {
  // Refining the motion stream too must not change the identity result.
  ConditioningState state(Feature{0.0, 0.0});
  state.set(kMotionStream, Feature{1.0, 1.0, 1.0});
  const StreamSystems systems{
      {kIdentityStream, half_system(1.0, 0.5)},
      {kMotionStream, AffineSystem(0.1 * Matrix::Identity(3, 3), Vector::Ones(3),
                                   LaggedCovarianceModel::isotropic(3, 1.0, 0.0))},
  };
  const AdaptationConfig identityOnly{.K = 4, .passes = 2, .streams = {kIdentityStream}};
  const AdaptationConfig both{.K = 4, .passes = 2, .streams = {kIdentityStream, kMotionStream}};
  const auto motion = MotionSequence::stationary(0, 4);
  const auto a = refine(systems, state, identityOnly, motion, SeedSpec(8)).first;
  const auto b = refine(systems, state, both, motion, SeedSpec(8)).first;
  EXPECT_EQ(a.identity(), b.identity());
  EXPECT_NE(b.at(kMotionStream), state.at(kMotionStream));
}

TEST(Refine, RejectsInvalidConfig) {
  const auto motion = MotionSequence::stationary(0, 2);
  EXPECT_THROW((void)refine(half_system(), ConditioningState(Feature{0.0, 0.0}), {.K = 0, .passes = 1}, motion,
                            SeedSpec(1)),
               std::invalid_argument);
  EXPECT_THROW((void)refine(half_system(), ConditioningState(Feature{0.0, 0.0}), {.K = 1, .passes = 0}, motion,
                            SeedSpec(1)),
               std::invalid_argument);
}

TEST(TwoPass, NoiselessStationaryRefinementIsANoOp) {
  const System s = AffineSystem(Matrix::Identity(2, 2), Vector::Zero(2), LaggedCovarianceModel::zero(2));
  const auto motion = MotionSequence::stationary(0, 10);
  const auto run = two_pass_inference(s, ConditioningState(Feature{1.0, 2.0}), {.K = 3}, motion, 10, SeedSpec(4));
  EXPECT_EQ(run.initial, run.refined);
  EXPECT_EQ(run.refinedState.identity(), (Feature{1.0, 2.0}));
}

TEST(TwoPass, RefinedFeatureIsTheMeanOfTheFirstKFrames) {
  const System s = half_system(1.0, 0.5);
  const auto motion = MotionSequence::stationary(0, 12);
  const auto run = two_pass_inference(s, ConditioningState(Feature{0.0, 0.0}), {.K = 5}, motion, 12, SeedSpec(4));
  EXPECT_EQ(run.refinedState.identity(), feature_mean(run.initial, 5));
  EXPECT_EQ(run.initial.size(), 12u);
  EXPECT_EQ(run.refined.size(), 12u);
}

TEST(TwoPass, KEqualToTUsesTheWholeSequence) {
  const System s = half_system(1.0, 0.0);
  const auto motion = MotionSequence::stationary(0, 6);
  const auto run = two_pass_inference(s, ConditioningState(Feature{0.0, 0.0}), {.K = 6}, motion, 6, SeedSpec(2));
  EXPECT_EQ(run.refinedState.identity(), feature_mean(run.initial, 6));
  EXPECT_EQ(run.refined.size(), 6u);
  EXPECT_THROW((void)two_pass_inference(s, ConditioningState(Feature{0.0, 0.0}), {.K = 7}, motion, 6, SeedSpec(2)),
               std::invalid_argument);
}

TEST(SelfConsistencyGradient, VanishesAtTheFixedPoint) {
  const System s = half_system();
  const Vector fStar = std::get<AffineSystem>(s).fixed_point();
  EXPECT_LT(self_consistency_gradient(s, Feature(fStar), {}, 4).cwiseAbs().maxCoeff(), 1e-10);
  const Vector g = self_consistency_gradient(s, Feature{0.0, 0.0}, {}, 4);
  EXPECT_NEAR(g(0), -2.0, 1e-15);
}

}  // namespace
}  // namespace ttsac
