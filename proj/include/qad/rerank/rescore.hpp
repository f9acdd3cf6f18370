#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qad/core/types.hpp"

namespace qad::rerank {

/// Hypothesis-by-feature matrix, columns in the order of `names`. Throws
/// DataError naming the hypothesis and the feature when one is missing.
Eigen::MatrixXd feature_matrix(const NBestList& list, std::span<const std::string> names);

std::vector<std::string> feature_names(const WeightVector& weights);
Eigen::VectorXd weight_values(const WeightVector& weights);

/// First index of the maximum; ties go to the earlier hypothesis.
Eigen::Index argmax(const Eigen::Ref<const Eigen::VectorXd>& scores);

/// combined_score = sum_f w_f * feature_f, then a stable descending sort, so
/// equal scores keep their original rank.
NBestList rescore(const NBestList& list, const WeightVector& weights);

/// Rescored list truncated to min(k, size). Throws DataError when k == 0.
NBestList prune_topk(const NBestList& list, const WeightVector& weights, std::size_t k);

/// Sets feature `name` on every hypothesis from a flat column holding one
/// value per hypothesis in file order. Throws DataError on a length mismatch.
void attach_score_column(std::vector<NBestList>& lists, const std::string& name,
                         std::span<const double> values);

}  // namespace qad::rerank
