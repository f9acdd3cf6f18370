#include "qad/metrics/metric.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "qad/core/error.hpp"
#include "qad/metrics/tokenizer.hpp"
#include "qad/text/utf8.hpp"

namespace qad::metrics {

MetricKind parse_metric_kind(std::string_view name) {
  if (name == "bleu") return MetricKind::bleu;
  if (name == "chrf") return MetricKind::chrf;
  if (name == "external") return MetricKind::external;
  throw DataError("unknown metric '" + std::string(name) + "' (expected bleu, chrf or external)");
}

std::string_view metric_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::bleu: return "bleu";
    case MetricKind::chrf: return "chrf";
    case MetricKind::external: break;
  }
  return "external";
}

Eigen::Index stats_size(MetricKind kind) {
  switch (kind) {
    case MetricKind::bleu: return 2 + 2 * kBleuMaxOrder;
    case MetricKind::chrf: return 3 * kChrfCharOrder;
    case MetricKind::external: break;
  }
  return 2;
}

std::string_view signature(MetricKind kind) {
  switch (kind) {
    case MetricKind::bleu: return kBleuSignature;
    case MetricKind::chrf: return kChrfSignature;
    case MetricKind::external: break;
  }
  return kExternalSignature;
}

// --- BLEU -------------------------------------------------------------------

namespace {

using NgramCounts = std::array<std::unordered_map<std::string, int>, kBleuMaxOrder>;

NgramCounts word_ngrams(const std::vector<std::string>& tokens) {
  NgramCounts counts;
  for (int n = 1; n <= kBleuMaxOrder; ++n) {
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      std::string key = tokens[i];
      for (int k = 1; k < n; ++k) {
        key += ' ';
        key += tokens[i + k];
      }
      ++counts[n - 1][key];
    }
  }
  return counts;
}

double my_log(double x) { return x == 0.0 ? -9999999999.0 : std::log(x); }

}  // namespace

MetricStats bleu_stats(std::string_view hyp, std::string_view ref) {
  const auto hyp_tokens = tokenize_13a_tokens(hyp);
  const auto ref_tokens = tokenize_13a_tokens(ref);
  const auto hyp_ngrams = word_ngrams(hyp_tokens);
  const auto ref_ngrams = word_ngrams(ref_tokens);
  MetricStats stats = MetricStats::Zero(stats_size(MetricKind::bleu));
  stats[0] = static_cast<double>(hyp_tokens.size());
  stats[1] = static_cast<double>(ref_tokens.size());
  for (int n = 0; n < kBleuMaxOrder; ++n) {
    long correct = 0;
    long total = 0;
    for (const auto& [ngram, count] : hyp_ngrams[n]) {
      total += count;
      if (auto it = ref_ngrams[n].find(ngram); it != ref_ngrams[n].end())
        correct += std::min(count, it->second);
    }
    stats[2 + n] = static_cast<double>(correct);
    stats[2 + kBleuMaxOrder + n] = static_cast<double>(total);
  }
  return stats;
}

double bleu_from_stats(const MetricStats& stats, bool effective_order) {
  const double sys_len = stats[0];
  const double ref_len = stats[1];
  double bp = 1.0;
  if (sys_len < ref_len) bp = sys_len > 0 ? std::exp(1.0 - ref_len / sys_len) : 0.0;

  const auto correct = stats.segment(2, kBleuMaxOrder);
  const auto total = stats.segment(2 + kBleuMaxOrder, kBleuMaxOrder);
  if ((correct == 0.0).all()) return 0.0;

  std::array<double, kBleuMaxOrder> precisions{};
  double smooth_mteval = 1.0;
  int eff_order = kBleuMaxOrder;
  for (int n = 1; n <= kBleuMaxOrder; ++n) {
    if (total[n - 1] == 0) break;
    if (effective_order) eff_order = n;
    if (correct[n - 1] == 0) {
      smooth_mteval *= 2;
      precisions[n - 1] = 100.0 / (smooth_mteval * total[n - 1]);
    } else {
      precisions[n - 1] = 100.0 * correct[n - 1] / total[n - 1];
    }
  }
  double log_sum = 0.0;
  for (int n = 0; n < eff_order; ++n) log_sum += my_log(precisions[n]);
  return bp * std::exp(log_sum / eff_order);
}

MetricScore bleu_score(const MetricStats& stats) {
  return {bleu_from_stats(stats, false), std::string(kBleuSignature)};
}

double sentence_bleu(std::string_view hyp, std::string_view ref) {
  return bleu_from_stats(bleu_stats(hyp, ref), true);
}

// --- chrF -------------------------------------------------------------------

CharNgramProfile chrf_profile(std::string_view text) {
  std::u32string chars;
  for (char32_t cp : text::decode(text))
    if (!text::is_space(cp)) chars.push_back(cp);
  CharNgramProfile profile;
  for (int n = 1; n <= kChrfCharOrder; ++n) {
    std::map<std::u32string, int> counts;
    for (std::size_t i = 0; i + n <= chars.size(); ++i) ++counts[chars.substr(i, n)];
    profile.orders[n - 1].assign(counts.begin(), counts.end());
  }
  return profile;
}

MetricStats chrf_stats(const CharNgramProfile& hyp, const CharNgramProfile& ref) {
  MetricStats stats = MetricStats::Zero(stats_size(MetricKind::chrf));
  for (int n = 0; n < kChrfCharOrder; ++n) {
    const auto& h = hyp.orders[n];
    const auto& r = ref.orders[n];
    long hyp_count = 0;
    long ref_count = 0;
    long match = 0;
    for (const auto& entry : h) hyp_count += entry.second;
    for (const auto& entry : r) ref_count += entry.second;
    auto hi = h.begin();
    auto ri = r.begin();
    while (hi != h.end() && ri != r.end()) {
      if (hi->first < ri->first) {
        ++hi;
      } else if (ri->first < hi->first) {
        ++ri;
      } else {
        match += std::min(hi->second, ri->second);
        ++hi;
        ++ri;
      }
    }
    // sacreBLEU does not count hypothesis n-grams of an order the reference lacks.
    stats[3 * n] = r.empty() ? 0.0 : static_cast<double>(hyp_count);
    stats[3 * n + 1] = static_cast<double>(ref_count);
    stats[3 * n + 2] = static_cast<double>(match);
  }
  return stats;
}

MetricStats chrf_stats(std::string_view hyp, std::string_view ref) {
  return chrf_stats(chrf_profile(hyp), chrf_profile(ref));
}

double chrf_from_stats(const MetricStats& stats) {
  constexpr double factor = kChrfBeta * kChrfBeta;
  double avg_prec = 0.0;
  double avg_rec = 0.0;
  int effective_order = 0;
  for (int n = 0; n < kChrfCharOrder; ++n) {
    const double n_hyp = stats[3 * n];
    const double n_ref = stats[3 * n + 1];
    const double n_match = stats[3 * n + 2];
    if (n_hyp > 0 && n_ref > 0) {
      avg_prec += n_match / n_hyp;
      avg_rec += n_match / n_ref;
      ++effective_order;
    }
  }
  if (effective_order == 0) return 0.0;
  avg_prec /= effective_order;
  avg_rec /= effective_order;
  if (avg_prec + avg_rec == 0.0) return 0.0;
  double score = (1 + factor) * avg_prec * avg_rec;
  score /= (factor * avg_prec) + avg_rec;
  return 100 * score;
}

MetricScore chrf_score(const MetricStats& stats) {
  return {chrf_from_stats(stats), std::string(kChrfSignature)};
}

double sentence_chrf(std::string_view hyp, std::string_view ref) {
  return chrf_from_stats(chrf_stats(hyp, ref));
}

// --- external ---------------------------------------------------------------

MetricStats external_stats(double sentence_value) {
  MetricStats stats(2);
  stats << sentence_value, 1.0;
  return stats;
}

double external_from_stats(const MetricStats& stats) {
  return stats[1] > 0 ? stats[0] / stats[1] : 0.0;
}

// --- generic ----------------------------------------------------------------

MetricStats sentence_stats(MetricKind kind, std::string_view hyp, std::string_view ref) {
  switch (kind) {
    case MetricKind::bleu: return bleu_stats(hyp, ref);
    case MetricKind::chrf: return chrf_stats(hyp, ref);
    case MetricKind::external: break;
  }
  throw DataError("the external metric has no text-derived statistics");
}

double score_from_stats(MetricKind kind, const MetricStats& stats) {
  switch (kind) {
    case MetricKind::bleu: return bleu_from_stats(stats, false);
    case MetricKind::chrf: return chrf_from_stats(stats);
    case MetricKind::external: break;
  }
  return external_from_stats(stats);
}

CorpusMetricResult corpus_metric(MetricKind kind, std::span<const std::string> hyps,
                                 std::span<const std::string> refs,
                                 std::span<const double> external_scores) {
  if (hyps.size() != refs.size())
    throw DataError("corpus length mismatch: " + std::to_string(hyps.size()) +
                    " hypotheses vs " + std::to_string(refs.size()) + " references");
  if (kind == MetricKind::bleu && refs.empty()) throw DataError("empty reference corpus");
  if (kind == MetricKind::external && external_scores.size() != hyps.size())
    throw DataError("external metric needs " + std::to_string(hyps.size()) +
                    " per-sentence scores, got " + std::to_string(external_scores.size()));

  const auto n = static_cast<Eigen::Index>(hyps.size());
  CorpusMetricResult result;
  result.sentence_stats.setZero(n, stats_size(kind));
  for (Eigen::Index i = 0; i < n; ++i) {
    result.sentence_stats.row(i) =
        kind == MetricKind::external
            ? external_stats(external_scores[i]).transpose()
            : sentence_stats(kind, hyps[i], refs[i]).transpose();
  }
  MetricStats total = MetricStats::Zero(stats_size(kind));
  for (Eigen::Index i = 0; i < n; ++i) total += result.sentence_stats.row(i).transpose();
  result.score = {score_from_stats(kind, total), std::string(signature(kind))};
  return result;
}

CorpusMetricResult corpus_metric(std::string_view name, std::span<const std::string> hyps,
                                 std::span<const std::string> refs,
                                 std::span<const double> external_scores) {
  return corpus_metric(parse_metric_kind(name), hyps, refs, external_scores);
}

}  // namespace qad::metrics
