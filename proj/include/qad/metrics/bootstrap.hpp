#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "qad/metrics/metric.hpp"

namespace qad::metrics {

struct BootstrapResult {
  double p_value = 1.0;
  MetricScore score_a;
  MetricScore score_b;
  std::size_t trials = 0;
  /// 'a' or 'b': the system with the higher full-corpus score (ties go to a).
  char winner = 'a';
};

/// Paired bootstrap resampling over precomputed per-sentence statistics.
/// Each trial draws n segment indices with replacement; the p-value is the
/// fraction of trials in which the observed winner does not score strictly
/// higher. Trial t uses its own engine seeded from (seed, t), so the result is
/// independent of `threads`.
BootstrapResult paired_bootstrap(MetricKind kind, const StatsMatrix& stats_a,
                                 const StatsMatrix& stats_b, std::size_t trials,
                                 std::uint64_t seed, std::size_t threads = 1);

/// Text front end; external per-sentence scores are taken from ext_a/ext_b.
BootstrapResult paired_bootstrap(MetricKind kind, std::span<const std::string> sys_a,
                                 std::span<const std::string> sys_b,
                                 std::span<const std::string> refs, std::size_t trials,
                                 std::uint64_t seed, std::size_t threads = 1,
                                 std::span<const double> ext_a = {},
                                 std::span<const double> ext_b = {});

}  // namespace qad::metrics
