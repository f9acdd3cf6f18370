#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qad::metrics {

/// Additive sufficient statistics of one sentence (or a whole corpus).
using MetricStats = Eigen::ArrayXd;
/// One row of statistics per sentence.
using StatsMatrix = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class MetricKind { bleu, chrf, external };

/// Accepts "bleu", "chrf", "external"; throws DataError otherwise.
MetricKind parse_metric_kind(std::string_view name);
std::string_view metric_name(MetricKind kind);

struct MetricScore {
  double value = 0.0;
  std::string signature;
};

inline constexpr int kBleuMaxOrder = 4;
inline constexpr int kChrfCharOrder = 6;
inline constexpr double kChrfBeta = 2.0;

inline constexpr std::string_view kBleuSignature =
    "nrefs:1|case:mixed|eff:no|tok:13a|smooth:exp|version:2.0.0";
inline constexpr std::string_view kSentenceBleuSignature =
    "nrefs:1|case:mixed|eff:yes|tok:13a|smooth:exp|version:2.0.0";
inline constexpr std::string_view kChrfSignature =
    "nrefs:1|case:mixed|eff:yes|nc:6|nw:0|space:no|version:2.0.0";
inline constexpr std::string_view kExternalSignature = "external:mean|nrefs:1";

Eigen::Index stats_size(MetricKind kind);
std::string_view signature(MetricKind kind);

// --- BLEU -------------------------------------------------------------------
// Layout: [hyp_len, ref_len, correct_1..4, total_1..4].

MetricStats bleu_stats(std::string_view hyp, std::string_view ref);
/// Exponential smoothing; effective_order=false gives the corpus setting.
double bleu_from_stats(const MetricStats& stats, bool effective_order = false);
MetricScore bleu_score(const MetricStats& stats);
/// Sentence-level BLEU (effective order, exp smoothing).
double sentence_bleu(std::string_view hyp, std::string_view ref);

// --- chrF -------------------------------------------------------------------
// Layout: [hyp_1, ref_1, match_1, ..., hyp_6, ref_6, match_6].

/// Character n-gram counts for n = 1..6 over the whitespace-stripped string,
/// each order sorted by n-gram for merge-style matching.
struct CharNgramProfile {
  std::array<std::vector<std::pair<std::u32string, int>>, kChrfCharOrder> orders;
};

CharNgramProfile chrf_profile(std::string_view text);
MetricStats chrf_stats(const CharNgramProfile& hyp, const CharNgramProfile& ref);
MetricStats chrf_stats(std::string_view hyp, std::string_view ref);
double chrf_from_stats(const MetricStats& stats);
MetricScore chrf_score(const MetricStats& stats);
double sentence_chrf(std::string_view hyp, std::string_view ref);

// --- external ---------------------------------------------------------------
// Layout: [sum, count]; the score is the mean of per-sentence values.

MetricStats external_stats(double sentence_value);
double external_from_stats(const MetricStats& stats);

// --- generic ----------------------------------------------------------------

/// Not defined for MetricKind::external (throws DataError).
MetricStats sentence_stats(MetricKind kind, std::string_view hyp, std::string_view ref);
double score_from_stats(MetricKind kind, const MetricStats& stats);

struct CorpusMetricResult {
  MetricScore score;
  StatsMatrix sentence_stats;
};

/// Corpus-level score. `external_scores` supplies per-sentence values for the
/// external metric and is ignored otherwise. Throws DataError on length
/// mismatch, a missing external score list, or an empty BLEU corpus.
CorpusMetricResult corpus_metric(MetricKind kind, std::span<const std::string> hyps,
                                 std::span<const std::string> refs,
                                 std::span<const double> external_scores = {});
CorpusMetricResult corpus_metric(std::string_view name, std::span<const std::string> hyps,
                                 std::span<const std::string> refs,
                                 std::span<const double> external_scores = {});

}  // namespace qad::metrics
