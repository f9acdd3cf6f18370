#include "qad/metrics/bootstrap.hpp"

#include <random>
#include <vector>

#include "qad/core/error.hpp"
#include "qad/util/parallel.hpp"

namespace qad::metrics {

BootstrapResult paired_bootstrap(MetricKind kind, const StatsMatrix& stats_a,
                                 const StatsMatrix& stats_b, std::size_t trials,
                                 std::uint64_t seed, std::size_t threads) {
  if (stats_a.rows() != stats_b.rows() || stats_a.cols() != stats_b.cols())
    throw DataError("paired bootstrap needs equally sized systems");
  if (trials < 1) throw DataError("paired bootstrap needs at least one trial");
  const Eigen::Index n = stats_a.rows();

  BootstrapResult result;
  result.trials = trials;
  const MetricStats total_a = stats_a.colwise().sum().transpose();
  const MetricStats total_b = stats_b.colwise().sum().transpose();
  result.score_a = {score_from_stats(kind, total_a), std::string(signature(kind))};
  result.score_b = {score_from_stats(kind, total_b), std::string(signature(kind))};
  result.winner = result.score_a.value >= result.score_b.value ? 'a' : 'b';
  if (n == 0) return result;

  std::vector<char> lost(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    MetricStats sum_a = MetricStats::Zero(stats_a.cols());
    MetricStats sum_b = MetricStats::Zero(stats_b.cols());
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto i = pick(rng);
      sum_a += stats_a.row(i).transpose();
      sum_b += stats_b.row(i).transpose();
    }
    const double a = score_from_stats(kind, sum_a);
    const double b = score_from_stats(kind, sum_b);
    lost[t] = result.winner == 'a' ? !(a > b) : !(b > a);
  });
  std::size_t losses = 0;
  for (char l : lost) losses += l;
  result.p_value = static_cast<double>(losses) / static_cast<double>(trials);
  return result;
}

BootstrapResult paired_bootstrap(MetricKind kind, std::span<const std::string> sys_a,
                                 std::span<const std::string> sys_b,
                                 std::span<const std::string> refs, std::size_t trials,
                                 std::uint64_t seed, std::size_t threads,
                                 std::span<const double> ext_a, std::span<const double> ext_b) {
  if (sys_a.size() != refs.size() || sys_b.size() != refs.size())
    throw DataError("paired bootstrap: system and reference lengths differ");
  const auto a = corpus_metric(kind, sys_a, refs, ext_a);
  const auto b = corpus_metric(kind, sys_b, refs, ext_b);
  return paired_bootstrap(kind, a.sentence_stats, b.sentence_stats, trials, seed, threads);
}

}  // namespace qad::metrics
