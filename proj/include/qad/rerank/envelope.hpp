#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "qad/core/types.hpp"

namespace qad::rerank {

/// Upper envelope of lines intercept_i + gamma * slope_i over the whole real
/// line. Piece k is the argmax on [start_k, start_{k+1}); the first piece
/// starts at -infinity. Starts strictly increase and adjacent pieces have
/// distinct argmax lines.
struct Envelope {
  struct Piece {
    double start = -std::numeric_limits<double>::infinity();
    std::size_t line = 0;
  };
  std::vector<Piece> pieces;

  std::size_t argmax(double gamma) const;
  /// Finite breakpoints, i.e. the starts of pieces 1..n-1.
  std::vector<double> boundaries() const;
};

/// Among lines with equal slope only the highest intercept (then lowest index)
/// can appear.
Envelope upper_envelope(std::span<const double> intercepts, std::span<const double> slopes);

/// Envelope of score(gamma) = sum_f w_f * f + gamma * direction_feature.
Envelope line_envelope(const NBestList& list, const WeightVector& weights,
                       std::string_view direction_feature);

}  // namespace qad::rerank
