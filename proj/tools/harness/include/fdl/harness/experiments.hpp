#pragma once

#include <cstdint>

#include "fdl/harness/config.hpp"
#include "fdl/harness/report.hpp"

namespace fdl::harness {

/// Throws validation_error naming every offending field; touches nothing else.
void validate(const ExperimentConfig& config);

/// Validates, dispatches and writes artifacts. Module errors end up in report.error.
ExperimentReport run(const ExperimentConfig& config);

struct SelfTestOptions {
  std::uint64_t seed = 7;
  /// Multiplies the closed-form kernel before it is compared with quadrature (fault injection).
  double kernel_constant_scale = 1.0;
};

/// Fast invariant battery; finishes in well under 30 s.
ExperimentReport self_test(const SelfTestOptions& options = {});

}  // namespace fdl::harness
