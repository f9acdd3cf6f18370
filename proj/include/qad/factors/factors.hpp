#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qad::factors {

/// p0 marks an ordinary token; p1..p6 mark entity categories.
enum class FactorLabel : std::uint8_t { p0, p1, p2, p3, p4, p5, p6 };

enum class EntityCategory : std::uint8_t { PER, LOC, ORG, MISC, PRO, EVT };

inline constexpr std::array<EntityCategory, 6> kAllCategories{
    EntityCategory::PER, EntityCategory::LOC, EntityCategory::ORG,
    EntityCategory::MISC, EntityCategory::PRO, EntityCategory::EVT};

FactorLabel label_of(EntityCategory category);
std::string_view label_name(FactorLabel label);
FactorLabel parse_label(std::string_view name);
std::string_view category_name(EntityCategory category);
EntityCategory parse_category(std::string_view name);

struct FactoredToken {
  std::string surface;
  FactorLabel factor = FactorLabel::p0;

  friend bool operator==(const FactoredToken&, const FactoredToken&) = default;
};

using FactoredSentence = std::vector<FactoredToken>;

/// Token range [start, end).
struct EntitySpan {
  std::size_t start = 0;
  std::size_t end = 0;
  EntityCategory category = EntityCategory::PER;

  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

/// Every token of a span gets the span's label, all others p0. Throws
/// DataError for empty, out-of-range or overlapping spans.
FactoredSentence attach_factors(std::span<const std::string> tokens,
                                std::span<const EntitySpan> spans);

/// U+2581, the SentencePiece word-initial marker.
inline constexpr std::string_view kDefaultSubwordMarker = "\xE2\x96\x81";

/// Gives each subword the label of the token it belongs to. Subwords, with
/// the marker stripped, must concatenate token by token to the token surfaces.
/// A marker may only open a token. Throws DataError naming the subword
/// position when the segmentation does not recompose.
FactoredSentence propagate_to_subwords(std::span<const FactoredToken> tokens,
                                       std::span<const std::string> subwords,
                                       std::string_view marker = kDefaultSubwordMarker);

/// `surface|pN` tokens separated by whitespace. The split is at the last '|'.
FactoredSentence parse_factored(std::string_view line);
std::string write_factored(std::span<const FactoredToken> sentence);

/// Entity occurrences per category, one per maximal run of the same non-p0
/// label. All six categories are present in the result.
std::map<EntityCategory, std::size_t> count_categories(std::span<const FactoredSentence> corpus);

/// Exact-match phrase list. Tagging is greedy left to right, longest phrase first.
class Gazetteer {
 public:
  void add(std::vector<std::string> phrase_tokens, EntityCategory category);
  std::vector<EntitySpan> tag(std::span<const std::string> tokens) const;
  std::size_t size() const { return count_; }

 private:
  // First token -> (phrase, category), longest phrase first.
  std::map<std::string, std::vector<std::pair<std::vector<std::string>, EntityCategory>>, std::less<>>
      phrases_;
  std::size_t count_ = 0;
};

/// Lines of `phrase<TAB>CATEGORY`.
Gazetteer parse_gazetteer(std::istream& in);

/// Lines of `sent_id start end CATEGORY`, grouped by sentence id.
std::map<std::size_t, std::vector<EntitySpan>> parse_standoff(std::istream& in);

}  // namespace qad::factors
