#include "qad/rerank/rescore.hpp"

#include <algorithm>
#include <numeric>

#include "qad/core/error.hpp"

namespace qad::rerank {

Eigen::MatrixXd feature_matrix(const NBestList& list, std::span<const std::string> names) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(list.size()), static_cast<Eigen::Index>(names.size()));
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& h = list.hypotheses[i];
    for (std::size_t f = 0; f < names.size(); ++f) {
      const auto v = h.features.get(names[f]);
      if (!v)
        throw DataError("segment " + std::to_string(list.segment_id) + ", hypothesis " +
                        std::to_string(i) + " ('" + h.text + "') lacks feature '" + names[f] + "'");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f)) = *v;
    }
  }
  return m;
}

std::vector<std::string> feature_names(const WeightVector& weights) {
  std::vector<std::string> names;
  names.reserve(weights.size());
  for (const auto& [name, w] : weights) names.push_back(name);
  return names;
}

Eigen::VectorXd weight_values(const WeightVector& weights) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(weights.size()));
  Eigen::Index i = 0;
  for (const auto& entry : weights) w[i++] = entry.second;
  return w;
}

Eigen::Index argmax(const Eigen::Ref<const Eigen::VectorXd>& scores) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[best]) best = i;
  return best;
}

NBestList rescore(const NBestList& list, const WeightVector& weights) {
  const auto names = feature_names(weights);
  const Eigen::VectorXd scores = feature_matrix(list, names) * weight_values(weights);
  std::vector<std::size_t> order(list.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[static_cast<Eigen::Index>(a)] > scores[static_cast<Eigen::Index>(b)];
  });
  NBestList out{list.segment_id, {}};
  out.hypotheses.reserve(list.size());
  for (auto i : order) {
    out.hypotheses.push_back(list.hypotheses[i]);
    out.hypotheses.back().combined_score = scores[static_cast<Eigen::Index>(i)];
  }
  return out;
}

NBestList prune_topk(const NBestList& list, const WeightVector& weights, std::size_t k) {
  if (k == 0) throw DataError("prune_topk needs k >= 1");
  auto out = rescore(list, weights);
  if (out.hypotheses.size() > k) out.hypotheses.resize(k);
  return out;
}

void attach_score_column(std::vector<NBestList>& lists, const std::string& name,
                         std::span<const double> values) {
  std::size_t total = 0;
  for (const auto& l : lists) total += l.size();
  if (total != values.size())
    throw DataError("score column '" + name + "' has " + std::to_string(values.size()) +
                    " values for " + std::to_string(total) + " hypotheses");
  std::size_t k = 0;
  for (auto& l : lists)
    for (auto& h : l.hypotheses) h.features.set(name, values[k++]);
}

}  // namespace qad::rerank
