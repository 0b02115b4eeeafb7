#pragma once

#include "ttsac/core.hpp"

namespace ttsac {

/// Feature-space stand-ins for identity-similarity and smoothness scores.
struct SequenceMetrics {
  /// Mean cosine of each frame to the reference μ, in [−1, 1].
  double meanIdentitySim = 0.0;
  /// ‖feature_mean(seq) − μ‖.
  double driftNorm = 0.0;
  /// 1 − mean clamped consecutive difference relative to ‖μ‖, in [0, 1].
  double smoothness = 1.0;
  /// ‖f_T − μ‖.
  double terminalDeviation = 0.0;
};

/// Signed differences refined − baseline.
struct MetricsDelta {
  double meanIdentitySim = 0.0;
  double driftNorm = 0.0;
  double smoothness = 0.0;
  double terminalDeviation = 0.0;

  // Higher similarity and smoothness are better; lower drift and deviation are better.
  [[nodiscard]] bool identity_improved() const noexcept { return meanIdentitySim > 0.0; }
  [[nodiscard]] bool drift_improved() const noexcept { return driftNorm < 0.0; }
  [[nodiscard]] bool smoothness_improved() const noexcept { return smoothness > 0.0; }
  [[nodiscard]] bool terminal_improved() const noexcept { return terminalDeviation < 0.0; }
};

[[nodiscard]] SequenceMetrics evaluate(const FeatureSequence& seq, const Feature& mu);

[[nodiscard]] MetricsDelta compare(const SequenceMetrics& baseline, const SequenceMetrics& refined);

}  // namespace ttsac
