#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "qad/core/types.hpp"
#include "qad/mbr/utility.hpp"

namespace qad::mbr {

/// Samples y(1..M) standing in for draws from the model distribution.
struct PseudoReferenceSet {
  SegmentId segment_id = 0;
  std::vector<std::string> samples;

  std::size_t size() const { return samples.size(); }
};

struct MbrResult {
  Hypothesis best;
  std::size_t best_index = 0;
  /// Mean utility of each candidate against all samples, in candidate order.
  Eigen::VectorXd expected_utilities;
};

/// Row means accumulated left to right, so results are bit-identical to a
/// plain double loop and independent of thread count.
Eigen::VectorXd expected_utilities(const Eigen::MatrixXd& utilities);

/// Expected utilities closer than this fraction of the largest |u| in the
/// matrix count as tied, so rounding noise cannot decide between candidates.
inline constexpr double kRelativeTieTolerance = 1e-9;

/// Absolute tie tolerance for a utility matrix.
double tie_tolerance(const Eigen::MatrixXd& utilities);

/// First index whose value is within `tolerance` of the maximum.
std::size_t tolerant_argmax(const Eigen::VectorXd& values, double tolerance);

/// argmax_i (1/M) sum_j u(y_j, candidate_i); ties go to the earlier candidate.
/// Throws DataError for empty candidates or samples.
MbrResult mbr_decode(const NBestList& candidates, const PseudoReferenceSet& prefs,
                     const UtilityFunction& u, std::size_t threads = 1);

/// MBR selection over a precomputed candidates-by-samples matrix.
MbrResult mbr_select(const NBestList& candidates, const Eigen::MatrixXd& utilities);

struct TwoStageOptions {
  std::size_t k = 50;
  bool dedupe = false;
  std::size_t threads = 1;
};

struct TwoStageResult {
  Hypothesis best;
  /// The k survivors of the reranker, which are both MBR candidates and samples.
  NBestList pruned;
  MbrResult mbr;
};

/// merge -> prune_topk(weights, k) -> MBR with the survivors as candidates and
/// pseudo-references. For an external utility the matrix must cover the merged
/// list (rows and columns in merged order); the survivors' sub-matrix is used.
TwoStageResult two_stage_decode(const NBestList& ensemble_nbest, const NBestList& doc_nbest,
                                const WeightVector& weights, const UtilityFunction& u,
                                const TwoStageOptions& options);

}  // namespace qad::mbr
