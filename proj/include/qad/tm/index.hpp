#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qad/core/types.hpp"

namespace qad::tm {

/// Lowercased whitespace tokens.
std::vector<std::string> tm_tokens(std::string_view sentence);

/// 1 - token edit distance / longer length. Two empty sequences score 1.
double similarity(std::span<const std::string> a, std::span<const std::string> b);
double similarity(std::string_view a, std::string_view b);

struct Match {
  std::size_t pair_id = 0;
  std::string source;
  std::string target;
  double similarity = 0.0;

  friend bool operator==(const Match&, const Match&) = default;
};

struct Posting {
  std::size_t pair_id = 0;
  std::uint32_t tf = 0;

  friend bool operator==(const Posting&, const Posting&) = default;
};

class TmIndex {
 public:
  static TmIndex build(const ParallelCorpus& corpus);

  std::size_t size() const { return pairs_.size(); }
  std::size_t vocabulary_size() const { return postings_.size(); }
  const SentencePair& pair(std::size_t id) const { return pairs_.at(id); }
  /// Postings sorted by pair id; empty for unknown tokens.
  std::span<const Posting> postings(std::string_view token) const;

  /// Up to k matches with similarity >= threshold, best first, ties by pair
  /// id. Candidates are ranked by bag-of-tokens overlap; the top 4k are
  /// rescored exactly, and the pool grows while an unscored candidate could
  /// still enter the result. Pairs sharing no token never match.
  std::vector<Match> query(std::string_view sentence, std::size_t k, double threshold) const;

  /// Binary serialization starting with the magic "TMIX1". Byte-identical
  /// for identical corpora.
  void save(std::ostream& out) const;
  static TmIndex load(std::istream& in);

  friend bool operator==(const TmIndex&, const TmIndex&) = default;

 private:
  std::vector<SentencePair> pairs_;
  std::vector<std::vector<std::string>> tokens_;
  std::map<std::string, std::vector<Posting>, std::less<>> postings_;
};

struct AdaptationSet {
  std::size_t input_id = 0;
  std::vector<Match> matches;
};

struct AdaptationStats {
  std::size_t inputs = 0;
  std::size_t matched_inputs = 0;
  std::size_t total_matches = 0;
  std::size_t distinct_pairs = 0;
};

struct AdaptationResult {
  std::vector<AdaptationSet> sets;
  AdaptationStats stats;
};

AdaptationResult extract_adaptation_sets(const TmIndex& index,
                                         std::span<const std::string> inputs, std::size_t k,
                                         double threshold, std::size_t threads = 1);

/// `input_id<TAB>similarity<TAB>source<TAB>target` per match.
void write_adaptation_sets(std::ostream& out, std::span<const AdaptationSet> sets);
/// key=value lines.
void write_stats(std::ostream& out, const AdaptationStats& stats);

}  // namespace qad::tm
