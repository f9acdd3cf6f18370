#include "qad/factors/factors.hpp"

#include <algorithm>
#include <istream>

#include "qad/core/error.hpp"
#include "qad/core/nbest.hpp"
#include "qad/text/utf8.hpp"

namespace qad::factors {

namespace {

constexpr std::array<std::string_view, 7> kLabelNames{"p0", "p1", "p2", "p3", "p4", "p5", "p6"};
constexpr std::array<std::string_view, 6> kCategoryNames{"PER", "LOC", "ORG", "MISC", "PRO", "EVT"};

bool starts_with(std::string_view s, std::string_view prefix) {
  return !prefix.empty() && s.substr(0, prefix.size()) == prefix;
}

}  // namespace

FactorLabel label_of(EntityCategory category) {
  return static_cast<FactorLabel>(static_cast<int>(category) + 1);
}

std::string_view label_name(FactorLabel label) { return kLabelNames[static_cast<std::size_t>(label)]; }

FactorLabel parse_label(std::string_view name) {
  for (std::size_t i = 0; i < kLabelNames.size(); ++i)
    if (kLabelNames[i] == name) return static_cast<FactorLabel>(i);
  throw DataError("unknown factor label '" + std::string(name) + "'");
}

std::string_view category_name(EntityCategory category) {
  return kCategoryNames[static_cast<std::size_t>(category)];
}

EntityCategory parse_category(std::string_view name) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i)
    if (kCategoryNames[i] == name) return static_cast<EntityCategory>(i);
  throw DataError("unknown entity category '" + std::string(name) + "'");
}

FactoredSentence attach_factors(std::span<const std::string> tokens,
                                std::span<const EntitySpan> spans) {
  FactoredSentence out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back({t, FactorLabel::p0});
  std::vector<bool> covered(tokens.size(), false);
  for (const auto& span : spans) {
    if (span.start >= span.end || span.end > tokens.size())
      throw DataError("entity span [" + std::to_string(span.start) + ", " +
                      std::to_string(span.end) + ") is invalid for " +
                      std::to_string(tokens.size()) + " tokens");
    for (std::size_t i = span.start; i < span.end; ++i) {
      if (covered[i])
        throw DataError("entity spans overlap at token " + std::to_string(i));
      covered[i] = true;
      out[i].factor = label_of(span.category);
    }
  }
  return out;
}

FactoredSentence propagate_to_subwords(std::span<const FactoredToken> tokens,
                                       std::span<const std::string> subwords,
                                       std::string_view marker) {
  FactoredSentence out;
  out.reserve(subwords.size());
  std::size_t token = 0;
  std::string buffer;
  for (std::size_t i = 0; i < subwords.size(); ++i) {
    std::string_view piece = subwords[i];
    if (starts_with(piece, marker)) {
      if (!buffer.empty())
        throw DataError("subword " + std::to_string(i) + " ('" + subwords[i] +
                        "') opens a new word inside token " + std::to_string(token));
      piece.remove_prefix(marker.size());
    }
    if (token >= tokens.size())
      throw DataError("subword " + std::to_string(i) + " ('" + subwords[i] +
                      "') lies past the last token");
    buffer += piece;
    const std::string& surface = tokens[token].surface;
    if (surface.compare(0, buffer.size(), buffer) != 0 || buffer.size() > surface.size())
      throw DataError("subword " + std::to_string(i) + " ('" + subwords[i] +
                      "') does not continue token " + std::to_string(token) + " ('" + surface + "')");
    out.push_back({subwords[i], tokens[token].factor});
    if (buffer.size() == surface.size()) {
      buffer.clear();
      ++token;
    }
  }
  if (token != tokens.size())
    throw DataError("subwords end inside token " + std::to_string(token) + " of " +
                    std::to_string(tokens.size()));
  return out;
}

FactoredSentence parse_factored(std::string_view line) {
  FactoredSentence out;
  for (const auto& item : text::split_ws(line)) {
    const auto bar = item.rfind('|');
    if (bar == std::string::npos || bar == 0)
      throw DataError("factored token '" + item + "' lacks a surface|pN form");
    out.push_back({item.substr(0, bar), parse_label(std::string_view(item).substr(bar + 1))});
  }
  return out;
}

std::string write_factored(std::span<const FactoredToken> sentence) {
  std::string out;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (i) out += ' ';
    out += sentence[i].surface;
    out += '|';
    out += label_name(sentence[i].factor);
  }
  return out;
}

std::map<EntityCategory, std::size_t> count_categories(std::span<const FactoredSentence> corpus) {
  std::map<EntityCategory, std::size_t> counts;
  for (auto c : kAllCategories) counts[c] = 0;
  for (const auto& sentence : corpus) {
    FactorLabel prev = FactorLabel::p0;
    for (const auto& tok : sentence) {
      if (tok.factor != FactorLabel::p0 && tok.factor != prev)
        ++counts[static_cast<EntityCategory>(static_cast<int>(tok.factor) - 1)];
      prev = tok.factor;
    }
  }
  return counts;
}

void Gazetteer::add(std::vector<std::string> phrase_tokens, EntityCategory category) {
  if (phrase_tokens.empty()) throw DataError("empty gazetteer phrase");
  auto& bucket = phrases_[phrase_tokens.front()];
  bucket.emplace_back(std::move(phrase_tokens), category);
  ++count_;
  std::stable_sort(bucket.begin(), bucket.end(), [](const auto& a, const auto& b) {
    return a.first.size() > b.first.size();
  });
}

std::vector<EntitySpan> Gazetteer::tag(std::span<const std::string> tokens) const {
  std::vector<EntitySpan> spans;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t matched = 0;
    if (auto it = phrases_.find(tokens[i]); it != phrases_.end()) {
      for (const auto& [phrase, category] : it->second) {
        if (i + phrase.size() > tokens.size()) continue;
        if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<long>(i))) {
          spans.push_back({i, i + phrase.size(), category});
          matched = phrase.size();
          break;
        }
      }
    }
    i += matched ? matched : 1;
  }
  return spans;
}

Gazetteer parse_gazetteer(std::istream& in) {
  Gazetteer g;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) throw ParseError("expected phrase<TAB>CATEGORY", number);
    auto tokens = text::split_ws(std::string_view(line).substr(0, tab));
    if (tokens.empty()) throw ParseError("empty gazetteer phrase", number);
    try {
      g.add(std::move(tokens), parse_category(text::trim(std::string_view(line).substr(tab + 1))));
    } catch (const ParseError&) {
      throw;
    } catch (const DataError& e) {
      throw ParseError(e.what(), number);
    }
  }
  return g;
}

std::map<std::size_t, std::vector<EntitySpan>> parse_standoff(std::istream& in) {
  std::map<std::size_t, std::vector<EntitySpan>> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto fields = text::split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() != 4) throw ParseError("expected 'sent_id start end CATEGORY'", number);
    try {
      auto index = [](const std::string& s) {
        const double v = parse_number(s);
        if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
          throw DataError("'" + s + "' is not a non-negative integer");
        return static_cast<std::size_t>(v);
      };
      out[index(fields[0])].push_back({index(fields[1]), index(fields[2]), parse_category(fields[3])});
    } catch (const ParseError&) {
      throw;
    } catch (const DataError& e) {
      throw ParseError(e.what(), number);
    }
  }
  return out;
}

}  // namespace qad::factors
