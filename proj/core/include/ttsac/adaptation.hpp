#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ttsac/core.hpp"
#include "ttsac/operators.hpp"

namespace ttsac {

inline const std::string kIdentityStream = "identity";
inline const std::string kMotionStream = "motion";

struct AdaptationConfig {
  /// Frames aggregated per estimate.
  std::size_t K = 1;
  /// Refinement iterations; one is the deployed procedure.
  std::size_t passes = 1;
  /// Streams to refine. The identity stream is always refined.
  std::set<std::string> streams{kIdentityStream};

  /// Throws std::invalid_argument unless K ≥ 1 and passes ≥ 1.
  void validate() const;
};

/// Conditioning features keyed by stream. The identity stream is mandatory;
/// other streams may have their own dimensions.
class ConditioningState {
 public:
  explicit ConditioningState(Feature identity);

  void set(const std::string& stream, Feature feature);
  [[nodiscard]] const Feature& at(const std::string& stream) const;
  [[nodiscard]] bool contains(const std::string& stream) const { return streams_.contains(stream); }
  [[nodiscard]] const Feature& identity() const { return at(kIdentityStream); }
  [[nodiscard]] const std::map<std::string, Feature>& streams() const noexcept { return streams_; }

  friend bool operator==(const ConditioningState&, const ConditioningState&) = default;

 private:
  std::map<std::string, Feature> streams_;
};

/// Iterates f^(0)..f^(P) and residuals ‖f^(k) − T̂(f^(k))‖ (both length P + 1).
/// With several refined streams the residual is the Euclidean norm over
/// the concatenation of their differences.
struct RefinementTrace {
  std::vector<ConditioningState> iterates;
  std::vector<double> residuals;
};

/// One system per conditioning stream. Streams do not cross-couple.
using StreamSystems = std::map<std::string, System>;

/// Monte Carlo conditioning estimate T̂(f): generate K frames, return their mean.
[[nodiscard]] Feature mc_estimate_T(const System& system, const Feature& f, std::size_t K,
                                    const MotionSequence& motion, SeedSpec seed);

/// Repeated f_s ← T̂_s(f_s) for every stream s in `cfg.streams`.
///
/// Pass k draws its estimates from `seed.trial(k)`; the trailing residual
/// evaluation uses `seed.trial(passes)`. Streams not listed in the config
/// are copied through untouched.
[[nodiscard]] std::pair<ConditioningState, RefinementTrace> refine(const StreamSystems& systems,
                                                                   const ConditioningState& state,
                                                                   const AdaptationConfig& cfg,
                                                                   const MotionSequence& motion,
                                                                   SeedSpec seed);

/// Single-system overload: `system` drives the identity stream.
[[nodiscard]] std::pair<ConditioningState, RefinementTrace> refine(const System& system,
                                                                   const ConditioningState& state,
                                                                   const AdaptationConfig& cfg,
                                                                   const MotionSequence& motion,
                                                                   SeedSpec seed);

struct TwoPassResult {
  FeatureSequence initial;
  FeatureSequence refined;
  ConditioningState refinedState;
};

/// Generate, refine from the first K generated frames, regenerate.
///
/// Pass 1 and pass 2 see the same motion sequence but independent noise
/// sub-streams. The identity stream's first refinement pass reuses the
/// first K frames of pass 1; further passes and other streams draw fresh
/// Monte Carlo estimates.
[[nodiscard]] TwoPassResult two_pass_inference(const StreamSystems& systems, const ConditioningState& state,
                                               const AdaptationConfig& cfg, const MotionSequence& motion,
                                               std::size_t length, SeedSpec seed);

[[nodiscard]] TwoPassResult two_pass_inference(const System& system, const ConditioningState& state,
                                               const AdaptationConfig& cfg, const MotionSequence& motion,
                                               std::size_t length, SeedSpec seed);

/// First-order gradient of the self-consistency objective, 2 (f − T(f)),
/// with the Jacobian term dropped.
[[nodiscard]] Vector self_consistency_gradient(const System& system, const Feature& f,
                                               const MotionParams& motion, std::size_t horizon);

}  // namespace ttsac
