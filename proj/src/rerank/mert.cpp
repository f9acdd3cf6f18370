#include "qad/rerank/mert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "qad/core/error.hpp"
#include "qad/core/nbest.hpp"
#include "qad/rerank/envelope.hpp"
#include "qad/rerank/rescore.hpp"
#include "qad/util/parallel.hpp"

namespace qad::rerank {

TuningProblem::TuningProblem(const TuningSet& ts, const std::vector<std::string>& feature_names,
                             metrics::MetricKind metric, const std::string& external_feature)
    : names_(feature_names), metric_(metric) {
  if (ts.lists.empty()) throw DataError("empty tuning set");
  const auto width = metrics::stats_size(metric);
  for (const auto& list : ts.lists) {
    if (list.empty())
      throw DataError("segment " + std::to_string(list.segment_id) + " has an empty n-best list");
    features_.push_back(feature_matrix(list, names_));
    metrics::StatsMatrix stats(static_cast<Eigen::Index>(list.size()), width);
    if (metric == metrics::MetricKind::external) {
      const std::vector<std::string> ext{external_feature};
      const Eigen::MatrixXd values = feature_matrix(list, ext);
      for (Eigen::Index i = 0; i < values.rows(); ++i)
        stats.row(i) = metrics::external_stats(values(i, 0)).transpose();
    } else {
      const auto id = list.segment_id;
      if (id < 0 || static_cast<std::size_t>(id) >= ts.references.size())
        throw DataError("no reference for segment " + std::to_string(id));
      const auto profile_ref = ts.references[static_cast<std::size_t>(id)];
      for (std::size_t i = 0; i < list.size(); ++i)
        stats.row(static_cast<Eigen::Index>(i)) =
            metrics::sentence_stats(metric, list.hypotheses[i].text, profile_ref).transpose();
    }
    stats_.push_back(std::move(stats));
  }
}

double TuningProblem::evaluate(const Eigen::VectorXd& weights) const {
  metrics::MetricStats total = metrics::MetricStats::Zero(metrics::stats_size(metric_));
  for (std::size_t s = 0; s < features_.size(); ++s) {
    const Eigen::VectorXd scores = features_[s] * weights;
    total += stats_[s].row(argmax(scores)).transpose();
  }
  return metrics::score_from_stats(metric_, total);
}

TuningProblem::LineResult TuningProblem::line_search(const Eigen::VectorXd& weights,
                                                     Eigen::Index d, std::size_t threads) const {
  struct Event {
    double gamma;
    std::size_t segment;
    std::size_t from;
    std::size_t to;
  };
  const std::size_t n = features_.size();
  std::vector<Envelope> envelopes(n);
  parallel_for(n, threads, [&](std::size_t s) {
    const Eigen::VectorXd base = features_[s] * weights;
    const Eigen::VectorXd slope = features_[s].col(d);
    envelopes[s] = upper_envelope(
        std::span<const double>(base.data(), static_cast<std::size_t>(base.size())),
        std::span<const double>(slope.data(), static_cast<std::size_t>(slope.size())));
  });

  metrics::MetricStats sum = metrics::MetricStats::Zero(metrics::stats_size(metric_));
  std::vector<Event> events;
  for (std::size_t s = 0; s < n; ++s) {
    const auto& pieces = envelopes[s].pieces;
    sum += stats_[s].row(static_cast<Eigen::Index>(pieces.front().line)).transpose();
    for (std::size_t k = 1; k < pieces.size(); ++k)
      events.push_back({pieces[k].start, s, pieces[k - 1].line, pieces[k].line});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.gamma != b.gamma ? a.gamma < b.gamma : a.segment < b.segment;
  });

  if (events.empty()) return {0.0, metrics::score_from_stats(metric_, sum)};

  // Sweep the intervals (-inf, g_0), [g_0, g_1), ..., [g_last, inf).
  LineResult best{0.0, -std::numeric_limits<double>::infinity()};
  bool best_contains_zero = false;
  double lower = -std::numeric_limits<double>::infinity();
  std::size_t e = 0;
  while (true) {
    const double upper =
        e < events.size() ? events[e].gamma : std::numeric_limits<double>::infinity();
    double point;
    if (std::isinf(lower)) point = upper - 1.0;
    else if (std::isinf(upper)) point = lower + 1.0;
    else point = 0.5 * (lower + upper);
    const double value = metrics::score_from_stats(metric_, sum);
    const bool contains_zero = lower <= 0.0 && 0.0 < upper;
    if (value > best.metric || (value == best.metric && contains_zero && !best_contains_zero)) {
      best = {contains_zero ? 0.0 : point, value};
      best_contains_zero = contains_zero;
    }
    if (e == events.size()) break;
    lower = upper;
    while (e < events.size() && events[e].gamma == lower) {
      const auto& ev = events[e];
      sum -= stats_[ev.segment].row(static_cast<Eigen::Index>(ev.from)).transpose();
      sum += stats_[ev.segment].row(static_cast<Eigen::Index>(ev.to)).transpose();
      ++e;
    }
  }
  return best;
}

MertResult mert_tune(const TuningSet& ts, const WeightVector& init, const MertOptions& options) {
  if (ts.lists.empty()) throw DataError("empty tuning set");
  if (init.empty()) throw DataError("MERT needs at least one feature weight");
  if (options.restarts < 1) throw DataError("MERT needs restarts >= 1");
  const auto names = feature_names(init);
  const TuningProblem problem(ts, names, options.metric, options.external_feature);

  MertResult result;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Eigen::VectorXd best_weights = weight_values(init);
  result.initial_metric = problem.evaluate(best_weights);
  result.metric = result.initial_metric;

  for (std::size_t r = 0; r < options.restarts; ++r) {
    Eigen::VectorXd w = weight_values(init);
    if (r > 0)
      for (Eigen::Index f = 0; f < w.size(); ++f) w[f] = uniform(rng);
    double current = problem.evaluate(w);
    result.trace.push_back({r, 0, "", 0.0, current});

    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
      Eigen::Index best_d = -1;
      TuningProblem::LineResult best_line{0.0, current};
      for (Eigen::Index d = 0; d < w.size(); ++d) {
        const auto line = problem.line_search(w, d, options.threads);
        if (line.metric > best_line.metric) {
          best_line = line;
          best_d = d;
        }
      }
      if (best_d < 0 || best_line.metric <= current + options.tolerance) break;
      Eigen::VectorXd candidate = w;
      candidate[best_d] += best_line.gamma;
      const double actual = problem.evaluate(candidate);
      if (actual <= current + options.tolerance) break;
      w = candidate;
      current = actual;
      result.trace.push_back({r, it, names[static_cast<std::size_t>(best_d)], best_line.gamma, current});
    }
    if (current > result.metric) {
      result.metric = current;
      best_weights = w;
    }
  }

  for (std::size_t f = 0; f < names.size(); ++f)
    result.weights[names[f]] = best_weights[static_cast<Eigen::Index>(f)];
  return result;
}

void write_tuning_report(std::ostream& out, const std::vector<MertStep>& trace) {
  out << "restart\titeration\tcoordinate\tgamma\tmetric\n";
  for (const auto& s : trace)
    out << s.restart << '\t' << s.iteration << '\t' << (s.coordinate.empty() ? "-" : s.coordinate)
        << '\t' << format_number(s.gamma) << '\t' << format_number(s.metric) << '\n';
}

}  // namespace qad::rerank
