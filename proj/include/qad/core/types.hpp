#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qad {

using SegmentId = std::int64_t;

struct Segment {
  SegmentId id = 0;
  std::string source_text;
  std::optional<std::string> reference_text;
};

enum class Origin { ensemble, document, other };

std::string_view to_string(Origin origin);

/// Named feature scores in file order. Names are unique.
class FeatureMap {
 public:
  using value_type = std::pair<std::string, double>;

  /// Inserts or overwrites.
  void set(std::string_view name, double value);
  std::optional<double> get(std::string_view name) const;
  bool contains(std::string_view name) const { return get(name).has_value(); }
  /// Throws DataError if the feature is absent.
  double at(std::string_view name) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

 private:
  std::vector<value_type> entries_;
};

struct Hypothesis {
  SegmentId segment_id = 0;
  std::string text;
  FeatureMap features;
  double combined_score = 0.0;
  Origin origin = Origin::other;

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

struct NBestList {
  SegmentId segment_id = 0;
  std::vector<Hypothesis> hypotheses;

  std::size_t size() const { return hypotheses.size(); }
  bool empty() const { return hypotheses.empty(); }

  friend bool operator==(const NBestList&, const NBestList&) = default;
};

/// Feature name to weight, iterated in name order.
using WeightVector = std::map<std::string, double, std::less<>>;

/// Throws DataError unless all weights are finite and at least one is non-zero.
void validate(const WeightVector& weights);

struct SentencePair {
  std::string source;
  std::string target;

  friend bool operator==(const SentencePair&, const SentencePair&) = default;
};

/// Half-open range [begin, end) of pair indices forming one document.
struct DocumentRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const DocumentRange&, const DocumentRange&) = default;
};

struct ParallelCorpus {
  std::vector<SentencePair> pairs;
  std::vector<DocumentRange> documents;

  std::size_t size() const { return pairs.size(); }

  /// Document ranges, or a single range covering everything when none are set.
  std::vector<DocumentRange> effective_documents() const;
};

/// Throws DataError unless document ranges partition [0, pairs.size()).
void validate(const ParallelCorpus& corpus);

}  // namespace qad
