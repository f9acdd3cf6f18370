#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qad/core/types.hpp"
#include "qad/metrics/metric.hpp"

namespace qad::rerank {

/// N-best lists with their references. references[segment_id] is the
/// reference of the list with that id.
struct TuningSet {
  std::vector<NBestList> lists;
  std::vector<std::string> references;
};

struct MertOptions {
  metrics::MetricKind metric = metrics::MetricKind::bleu;
  std::size_t restarts = 1;
  std::uint64_t seed = 0;
  /// Minimum corpus-metric gain for a step to be taken.
  double tolerance = 1e-4;
  std::size_t max_iterations = 1000;
  /// For the external metric: the hypothesis feature holding its sentence score.
  std::string external_feature = "external";
  std::size_t threads = 1;
};

struct MertStep {
  std::size_t restart = 0;
  std::size_t iteration = 0;
  std::string coordinate;
  double gamma = 0.0;
  double metric = 0.0;
};

struct MertResult {
  WeightVector weights;
  double metric = 0.0;
  double initial_metric = 0.0;
  std::vector<MertStep> trace;
};

/// Precomputed per-segment feature and sentence-statistics matrices; the unit
/// of work for line searches and corpus evaluation.
class TuningProblem {
 public:
  TuningProblem(const TuningSet& ts, const std::vector<std::string>& feature_names,
                metrics::MetricKind metric, const std::string& external_feature = "external");

  /// Corpus metric of the 1-best under `weights` (values in feature-name order).
  double evaluate(const Eigen::VectorXd& weights) const;

  struct LineResult {
    double gamma = 0.0;
    double metric = 0.0;
  };
  /// Exact line search along coordinate `d`: envelopes per segment, swept in
  /// order of breakpoints with summed statistics; returns the best interval's
  /// representative point (midpoint, or boundary -/+ 1 for unbounded ends).
  LineResult line_search(const Eigen::VectorXd& weights, Eigen::Index d,
                         std::size_t threads = 1) const;

  const std::vector<std::string>& feature_names() const { return names_; }
  std::size_t segments() const { return features_.size(); }

 private:
  std::vector<std::string> names_;
  metrics::MetricKind metric_;
  std::vector<Eigen::MatrixXd> features_;
  std::vector<metrics::StatsMatrix> stats_;
};

/// Coordinate-wise MERT. Restart 0 starts at `init`; later restarts draw each
/// weight uniformly from [-1, 1]. Every accepted step strictly improves the
/// tuning-set metric by more than the tolerance, so the result never scores
/// below `init`. Throws DataError on an empty tuning set.
MertResult mert_tune(const TuningSet& ts, const WeightVector& init, const MertOptions& options);

/// TSV: restart, iteration, coordinate, gamma, metric.
void write_tuning_report(std::ostream& out, const std::vector<MertStep>& trace);

}  // namespace qad::rerank
