#include "qad/rerank/grid.hpp"

#include <algorithm>
#include <cmath>

#include "qad/core/error.hpp"
#include "qad/core/nbest.hpp"
#include "qad/util/parallel.hpp"

namespace qad::rerank {

std::string EnsembleSpec::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    if (i) out += " + ";
    auto w = format_number(c.weight);
    if (w.find_first_of(".e") == std::string::npos) w += ".0";
    out += w + " · (";
    if (c.multiplicity != 1) out += std::to_string(c.multiplicity) + "×";
    out += c.model_label + ")";
  }
  return out;
}

WeightVector EnsembleSpec::to_weights() const {
  WeightVector weights;
  for (const auto& c : components) {
    if (c.multiplicity < 1) throw DataError("multiplicity of '" + c.model_label + "' must be >= 1");
    if (!std::isfinite(c.weight)) throw DataError("weight of '" + c.model_label + "' is not finite");
    if (!weights.emplace(c.model_label, c.multiplicity * c.weight).second)
      throw DataError("duplicate ensemble component '" + c.model_label + "'");
  }
  return weights;
}

GridAxis parse_grid_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw DataError("grid axis must look like name=v1,v2,...: '" + spec + "'");
  GridAxis axis;
  axis.model_label = spec.substr(0, eq);
  std::size_t pos = eq + 1;
  while (pos <= spec.size()) {
    auto comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    axis.values.push_back(parse_number(spec.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return axis;
}

GridSearchResult grid_search_weights(const TuningSet& ts, const std::vector<GridAxis>& grid,
                                     metrics::MetricKind metric,
                                     const std::string& external_feature, std::size_t threads) {
  if (grid.empty()) throw DataError("grid search needs at least one model axis");
  std::vector<GridAxis> axes = grid;
  std::vector<std::string> names;
  std::size_t total = 1;
  for (auto& axis : axes) {
    if (axis.values.empty()) throw DataError("grid for '" + axis.model_label + "' is empty");
    if (axis.multiplicity < 1)
      throw DataError("multiplicity of '" + axis.model_label + "' must be >= 1");
    std::sort(axis.values.begin(), axis.values.end());
    axis.values.erase(std::unique(axis.values.begin(), axis.values.end()), axis.values.end());
    names.push_back(axis.model_label);
    total *= axis.values.size();
  }
  const TuningProblem problem(ts, names, metric, external_feature);

  // Tuple t enumerates axes odometer-style with the last axis fastest, which is
  // lexicographic order over the sorted value lists.
  const auto tuple = [&](std::size_t t) {
    Eigen::VectorXd w(static_cast<Eigen::Index>(axes.size()));
    for (std::size_t a = axes.size(); a-- > 0;) {
      const auto& values = axes[a].values;
      w[static_cast<Eigen::Index>(a)] = values[t % values.size()];
      t /= values.size();
    }
    return w;
  };
  std::vector<double> scores(total);
  parallel_for(total, threads, [&](std::size_t t) {
    Eigen::VectorXd w = tuple(t);
    for (std::size_t a = 0; a < axes.size(); ++a)
      w[static_cast<Eigen::Index>(a)] *= axes[a].multiplicity;
    scores[t] = problem.evaluate(w);
  });
  const auto best = static_cast<std::size_t>(
      std::max_element(scores.begin(), scores.end()) - scores.begin());

  GridSearchResult result;
  result.metric = scores[best];
  result.evaluated = total;
  const Eigen::VectorXd w = tuple(best);
  for (std::size_t a = 0; a < axes.size(); ++a)
    result.best.components.push_back(
        {axes[a].model_label, axes[a].multiplicity, w[static_cast<Eigen::Index>(a)]});
  return result;
}

}  // namespace qad::rerank
