#include "qad/mbr/decode.hpp"

#include <unordered_map>

#include "qad/core/error.hpp"
#include "qad/core/nbest.hpp"
#include "qad/rerank/rescore.hpp"

namespace qad::mbr {

Eigen::VectorXd expected_utilities(const Eigen::MatrixXd& utilities) {
  Eigen::VectorXd e(utilities.rows());
  const auto m = static_cast<double>(utilities.cols());
  for (Eigen::Index i = 0; i < utilities.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < utilities.cols(); ++j) sum += utilities(i, j);
    e[i] = sum / m;
  }
  return e;
}

double tie_tolerance(const Eigen::MatrixXd& utilities) {
  return kRelativeTieTolerance * utilities.cwiseAbs().maxCoeff();
}

std::size_t tolerant_argmax(const Eigen::VectorXd& values, double tolerance) {
  const double top = values.maxCoeff();
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (values[i] >= top - tolerance) return static_cast<std::size_t>(i);
  return 0;
}

MbrResult mbr_select(const NBestList& candidates, const Eigen::MatrixXd& utilities) {
  if (candidates.empty()) throw DataError("MBR needs at least one candidate");
  if (utilities.rows() != static_cast<Eigen::Index>(candidates.size()) || utilities.cols() < 1)
    throw DataError("utility matrix does not match the candidate list");
  MbrResult result;
  result.expected_utilities = expected_utilities(utilities);
  result.best_index = tolerant_argmax(result.expected_utilities, tie_tolerance(utilities));
  result.best = candidates.hypotheses[result.best_index];
  return result;
}

MbrResult mbr_decode(const NBestList& candidates, const PseudoReferenceSet& prefs,
                     const UtilityFunction& u, std::size_t threads) {
  if (candidates.empty()) throw DataError("MBR needs at least one candidate");
  if (prefs.samples.empty()) throw DataError("MBR needs at least one pseudo-reference");
  std::vector<std::string> texts;
  texts.reserve(candidates.size());
  for (const auto& h : candidates.hypotheses) texts.push_back(h.text);
  return mbr_select(candidates, utility_matrix(texts, prefs.samples, u, threads));
}

TwoStageResult two_stage_decode(const NBestList& ensemble_nbest, const NBestList& doc_nbest,
                                const WeightVector& weights, const UtilityFunction& u,
                                const TwoStageOptions& options) {
  const auto merged = merge_nbest(ensemble_nbest, doc_nbest, options.dedupe);
  if (merged.empty())
    throw DataError("segment " + std::to_string(merged.segment_id) + " has no hypotheses");

  TwoStageResult result;
  result.pruned = rerank::prune_topk(merged, weights, options.k);
  std::vector<std::string> texts;
  for (const auto& h : result.pruned.hypotheses) texts.push_back(h.text);

  if (u.kind == UtilityKind::external_matrix) {
    const auto n = static_cast<Eigen::Index>(merged.size());
    if (u.external.rows() != n || u.external.cols() != n)
      throw DataError("segment " + std::to_string(merged.segment_id) +
                      ": external utility matrix must be " + std::to_string(n) + "x" +
                      std::to_string(n) + " over the merged list");
    // Locate each survivor in the merged list; texts may repeat, so consume
    // positions in order.
    std::unordered_multimap<std::string_view, std::size_t> positions;
    for (std::size_t i = merged.size(); i-- > 0;) positions.emplace(merged.hypotheses[i].text, i);
    std::vector<Eigen::Index> rows;
    std::vector<bool> used(merged.size(), false);
    for (const auto& h : result.pruned.hypotheses) {
      auto [lo, hi] = positions.equal_range(h.text);
      std::size_t pick = merged.size();
      for (auto it = lo; it != hi; ++it)
        if (!used[it->second] && it->second < pick) pick = it->second;
      used[pick] = true;
      rows.push_back(static_cast<Eigen::Index>(pick));
    }
    Eigen::MatrixXd sub(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < rows.size(); ++j)
        sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = u.external(rows[i], rows[j]);
    result.mbr = mbr_select(result.pruned, sub);
  } else {
    result.mbr = mbr_decode(result.pruned, {merged.segment_id, texts}, u, options.threads);
  }
  result.best = result.mbr.best;
  return result;
}

}  // namespace qad::mbr
