#include "ttsac/metrics.hpp"

#include <algorithm>

namespace ttsac {

SequenceMetrics evaluate(const FeatureSequence& seq, const Feature& mu) {
  if (seq.empty()) {
    throw std::invalid_argument("evaluate: empty sequence");
  }
  if (seq.dim() != mu.dim()) {
    throw std::invalid_argument("evaluate: reference dimension does not match the sequence");
  }
  const double muNorm = mu.values().norm();
  if (muNorm == 0.0) {
    throw DegenerateInputError("evaluate: reference feature is the zero vector");
  }

  SequenceMetrics out;
  double simSum = 0.0;
  for (const auto& frame : seq) {
    simSum += cosine_similarity(frame, mu);
  }
  out.meanIdentitySim = simSum / static_cast<double>(seq.size());
  out.driftNorm = (feature_mean(seq, seq.size()).values() - mu.values()).norm();
  out.terminalDeviation = (seq[seq.size() - 1].values() - mu.values()).norm();

  if (seq.size() > 1) {
    double step = 0.0;
    for (std::size_t t = 1; t < seq.size(); ++t) {
      const double diff = (seq[t].values() - seq[t - 1].values()).norm();
      step += std::min(1.0, diff / (muNorm + 1e-12));
    }
    out.smoothness = std::clamp(1.0 - step / static_cast<double>(seq.size() - 1), 0.0, 1.0);
  }
  return out;
}

MetricsDelta compare(const SequenceMetrics& baseline, const SequenceMetrics& refined) {
  return {
      .meanIdentitySim = refined.meanIdentitySim - baseline.meanIdentitySim,
      .driftNorm = refined.driftNorm - baseline.driftNorm,
      .smoothness = refined.smoothness - baseline.smoothness,
      .terminalDeviation = refined.terminalDeviation - baseline.terminalDeviation,
  };
}

}  // namespace ttsac
