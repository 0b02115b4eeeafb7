#pragma once

#include "ttsac/analytics.hpp"
#include "ttsac/harness/config.hpp"
#include "ttsac/harness/record.hpp"
#include "ttsac/operators.hpp"

namespace ttsac::harness {

/// The seeded system described by `cfg.system`, or by `family` when given.
[[nodiscard]] System build_system(const ExperimentConfig& cfg);
[[nodiscard]] System build_system(const ExperimentConfig& cfg, Family family);

/// Driving-signal parameters: the pipeline's drift and motion noise;
/// empty for the affine and nonlinear families.
[[nodiscard]] MotionParams motion_params(const ExperimentConfig& cfg, Family family);

/// Initial conditioning feature. For the pipeline this is also the
/// reference identity μ; the affine and nonlinear families start at 0.
[[nodiscard]] Feature initial_feature(const ExperimentConfig& cfg, Family family);

/// Run one suite. Deterministic given the config; each record carries
/// pass flags for the checks it performed.
[[nodiscard]] SuiteResult run_suite(const ExperimentConfig& cfg);

}  // namespace ttsac::harness
