#include "ttsac/adaptation.hpp"

#include <cmath>
#include <functional>

namespace ttsac {

namespace {

constexpr std::uint64_t kFirstPass = 1;
constexpr std::uint64_t kSecondPass = 2;
constexpr std::uint64_t kRefinement = 3;

using Estimator = std::function<Feature(const std::string& stream, std::size_t pass, const Feature& f)>;

void check_streams(const StreamSystems& systems, const ConditioningState& state, const AdaptationConfig& cfg) {
  cfg.validate();
  for (const auto& stream : cfg.streams) {
    if (!state.contains(stream)) {
      throw std::invalid_argument("refine: stream '" + stream + "' is not present in the conditioning state");
    }
    if (!systems.contains(stream)) {
      throw std::invalid_argument("refine: no system registered for stream '" + stream + "'");
    }
  }
}

std::pair<ConditioningState, RefinementTrace> run_refinement(const ConditioningState& state,
                                                             const AdaptationConfig& cfg,
                                                             const Estimator& estimate) {
  RefinementTrace trace;
  trace.iterates.reserve(cfg.passes + 1);
  trace.residuals.reserve(cfg.passes + 1);
  trace.iterates.push_back(state);

  ConditioningState current = state;
  for (std::size_t pass = 0; pass <= cfg.passes; ++pass) {
    ConditioningState next = current;
    double squared = 0.0;
    for (const auto& stream : cfg.streams) {
      const Feature& f = current.at(stream);
      Feature estimated = estimate(stream, pass, f);
      squared += (f.values() - estimated.values()).squaredNorm();
      next.set(stream, std::move(estimated));
    }
    trace.residuals.push_back(std::sqrt(squared));
    if (pass == cfg.passes) {
      break;
    }
    current = std::move(next);
    trace.iterates.push_back(current);
  }
  return {std::move(current), std::move(trace)};
}

StreamSystems identity_only(const System& system) { return StreamSystems{{kIdentityStream, system}}; }

}  // namespace

void AdaptationConfig::validate() const {
  if (K == 0) {
    throw std::invalid_argument("adaptation: K must be at least 1");
  }
  if (passes == 0) {
    throw std::invalid_argument("adaptation: passes must be at least 1");
  }
}

ConditioningState::ConditioningState(Feature identity) { streams_.emplace(kIdentityStream, std::move(identity)); }

void ConditioningState::set(const std::string& stream, Feature feature) {
  if (stream == kIdentityStream && feature.dim() != identity().dim()) {
    throw std::invalid_argument("identity stream dimension cannot change");
  }
  streams_.insert_or_assign(stream, std::move(feature));
}

const Feature& ConditioningState::at(const std::string& stream) const {
  const auto it = streams_.find(stream);
  if (it == streams_.end()) {
    throw std::invalid_argument("conditioning state has no stream '" + stream + "'");
  }
  return it->second;
}

Feature mc_estimate_T(const System& system, const Feature& f, std::size_t K, const MotionSequence& motion,
                      SeedSpec seed) {
  if (K == 0) {
    throw std::invalid_argument("mc_estimate_T: K must be at least 1");
  }
  return feature_mean(generate_sequence(system, f, motion, K, seed), K);
}

std::pair<ConditioningState, RefinementTrace> refine(const StreamSystems& systems, const ConditioningState& state,
                                                     const AdaptationConfig& cfg, const MotionSequence& motion,
                                                     SeedSpec seed) {
  AdaptationConfig effective = cfg;
  effective.streams.insert(kIdentityStream);
  check_streams(systems, state, effective);
  return run_refinement(state, effective, [&](const std::string& stream, std::size_t pass, const Feature& f) {
    return mc_estimate_T(systems.at(stream), f, effective.K, motion, seed.trial(pass));
  });
}

std::pair<ConditioningState, RefinementTrace> refine(const System& system, const ConditioningState& state,
                                                     const AdaptationConfig& cfg, const MotionSequence& motion,
                                                     SeedSpec seed) {
  return refine(identity_only(system), state, cfg, motion, seed);
}

TwoPassResult two_pass_inference(const StreamSystems& systems, const ConditioningState& state,
                                 const AdaptationConfig& cfg, const MotionSequence& motion, std::size_t length,
                                 SeedSpec seed) {
  AdaptationConfig effective = cfg;
  effective.streams.insert(kIdentityStream);
  check_streams(systems, state, effective);
  if (length < effective.K) {
    throw std::invalid_argument("two_pass_inference: T=" + std::to_string(length) + " is shorter than K=" +
                                std::to_string(effective.K));
  }
  const System& identitySystem = systems.at(kIdentityStream);

  TwoPassResult result{
      .initial = generate_sequence(identitySystem, state.identity(), motion, length, seed.substream(kFirstPass)),
      .refined = {},
      .refinedState = state,
  };

  const SeedSpec refineSeed = seed.substream(kRefinement);
  auto [refinedState, trace] =
      run_refinement(state, effective, [&](const std::string& stream, std::size_t pass, const Feature& f) {
        if (pass == 0 && stream == kIdentityStream) {
          return feature_mean(result.initial, effective.K);
        }
        return mc_estimate_T(systems.at(stream), f, effective.K, motion, refineSeed.trial(pass));
      });

  result.refined =
      generate_sequence(identitySystem, refinedState.identity(), motion, length, seed.substream(kSecondPass));
  result.refinedState = std::move(refinedState);
  return result;
}

TwoPassResult two_pass_inference(const System& system, const ConditioningState& state, const AdaptationConfig& cfg,
                                 const MotionSequence& motion, std::size_t length, SeedSpec seed) {
  return two_pass_inference(identity_only(system), state, cfg, motion, length, seed);
}

Vector self_consistency_gradient(const System& system, const Feature& f, const MotionParams& motion,
                                 std::size_t horizon) {
  return 2.0 * (f.values() - apply_T(system, f, motion, horizon).values());
}

}  // namespace ttsac
