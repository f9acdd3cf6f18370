#include "qad/core/types.hpp"

#include <cmath>

#include "qad/core/error.hpp"

namespace qad {

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::ensemble: return "ensemble";
    case Origin::document: return "document";
    case Origin::other: break;
  }
  return "other";
}

void FeatureMap::set(std::string_view name, double value) {
  for (auto& [n, v] : entries_) {
    if (n == name) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(std::string(name), value);
}

std::optional<double> FeatureMap::get(std::string_view name) const {
  for (const auto& [n, v] : entries_)
    if (n == name) return v;
  return std::nullopt;
}

double FeatureMap::at(std::string_view name) const {
  if (auto v = get(name)) return *v;
  throw DataError("missing feature '" + std::string(name) + "'");
}

void validate(const WeightVector& weights) {
  bool nonzero = false;
  for (const auto& [name, w] : weights) {
    if (!std::isfinite(w)) throw DataError("weight '" + name + "' is not finite");
    nonzero = nonzero || w != 0.0;
  }
  if (!nonzero) throw DataError("weight vector has no non-zero weight");
}

std::vector<DocumentRange> ParallelCorpus::effective_documents() const {
  if (!documents.empty()) return documents;
  if (pairs.empty()) return {};
  return {DocumentRange{0, pairs.size()}};
}

void validate(const ParallelCorpus& corpus) {
  std::size_t expected = 0;
  for (const auto& doc : corpus.documents) {
    if (doc.begin != expected || doc.end <= doc.begin)
      throw DataError("document ranges must partition the corpus (range " +
                      std::to_string(doc.begin) + " " + std::to_string(doc.end) + ")");
    expected = doc.end;
  }
  if (!corpus.documents.empty() && expected != corpus.pairs.size())
    throw DataError("document ranges cover " + std::to_string(expected) + " of " +
                    std::to_string(corpus.pairs.size()) + " pairs");
}

}  // namespace qad
