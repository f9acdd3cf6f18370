#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qad/core/types.hpp"
#include "qad/metrics/metric.hpp"
#include "qad/rerank/mert.hpp"

namespace qad::rerank {

/// One ensemble member, e.g. the "1.0 · (2×A)" term: label A, multiplicity 2,
/// weight 1.0. Its effective weight is multiplicity * weight.
struct EnsembleComponent {
  std::string model_label;
  int multiplicity = 1;
  double weight = 1.0;
};

struct EnsembleSpec {
  std::vector<EnsembleComponent> components;

  /// Renders "1.0 · (2×A) + 0.8 · (B)".
  std::string to_string() const;
  /// Label -> multiplicity * weight; throws DataError on invalid components.
  WeightVector to_weights() const;
};

/// Candidate weights for one model column.
struct GridAxis {
  std::string model_label;
  std::vector<double> values;
  int multiplicity = 1;
};

struct GridSearchResult {
  EnsembleSpec best;
  double metric = 0.0;
  std::size_t evaluated = 0;
};

/// Exhaustively scores every weight tuple by the corpus metric of the
/// resulting 1-best lists. Axis values are visited in ascending order and the
/// first maximal tuple wins. Model scores are read from hypothesis features
/// named by the axis labels; a missing column raises DataError.
GridSearchResult grid_search_weights(const TuningSet& ts, const std::vector<GridAxis>& grid,
                                     metrics::MetricKind metric,
                                     const std::string& external_feature = "external",
                                     std::size_t threads = 1);

/// Parses "name=v1,v2,..." into an axis.
GridAxis parse_grid_axis(const std::string& spec);

}  // namespace qad::rerank
