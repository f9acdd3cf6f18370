#include "qad/rerank/envelope.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "qad/core/error.hpp"
#include "qad/rerank/rescore.hpp"

namespace qad::rerank {

std::size_t Envelope::argmax(double gamma) const {
  auto it = std::upper_bound(pieces.begin(), pieces.end(), gamma,
                             [](double g, const Piece& p) { return g < p.start; });
  return it == pieces.begin() ? pieces.front().line : std::prev(it)->line;
}

std::vector<double> Envelope::boundaries() const {
  std::vector<double> out;
  for (std::size_t k = 1; k < pieces.size(); ++k) out.push_back(pieces[k].start);
  return out;
}

Envelope upper_envelope(std::span<const double> intercepts, std::span<const double> slopes) {
  Envelope env;
  const std::size_t n = intercepts.size();
  if (n == 0) return env;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Slope ascending; within a slope the dominating line comes first.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (slopes[a] != slopes[b]) return slopes[a] < slopes[b];
    return intercepts[a] > intercepts[b];
  });

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t line = order[k];
    if (k > 0 && slopes[order[k - 1]] == slopes[line]) continue;
    double start = -std::numeric_limits<double>::infinity();
    while (!env.pieces.empty()) {
      const auto& top = env.pieces.back();
      start = (intercepts[top.line] - intercepts[line]) / (slopes[line] - slopes[top.line]);
      if (start <= top.start) {
        env.pieces.pop_back();
        start = -std::numeric_limits<double>::infinity();
      } else {
        break;
      }
    }
    env.pieces.push_back({start, line});
  }
  return env;
}

Envelope line_envelope(const NBestList& list, const WeightVector& weights,
                       std::string_view direction_feature) {
  const auto names = feature_names(weights);
  const Eigen::VectorXd base = feature_matrix(list, names) * weight_values(weights);
  const std::vector<std::string> dir{std::string(direction_feature)};
  const Eigen::VectorXd slope = feature_matrix(list, dir).col(0);
  return upper_envelope(std::span<const double>(base.data(), static_cast<std::size_t>(base.size())),
                        std::span<const double>(slope.data(), static_cast<std::size_t>(slope.size())));
}

}  // namespace qad::rerank
