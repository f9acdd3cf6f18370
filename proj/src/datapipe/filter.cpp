#include "qad/datapipe/filter.hpp"

#include <ostream>
#include <unordered_set>

#include "qad/core/error.hpp"
#include "qad/text/utf8.hpp"

namespace qad::datapipe {

namespace {

bool is_nonprinting(char32_t c) {
  if (text::is_space(c)) return false;
  if (c < 0x20 || (c >= 0x7F && c <= 0x9F)) return true;
  switch (c) {
    case 0x00AD: case 0x061C: case 0x180E: case 0xFEFF: return true;
    default: break;
  }
  return (c >= 0x200B && c <= 0x200F) || (c >= 0x202A && c <= 0x202E) ||
         (c >= 0x2060 && c <= 0x2064) || (c >= 0x2066 && c <= 0x2069);
}

// Returns 0 when the character is kept as is.
const char* punct_replacement(char32_t c) {
  switch (c) {
    case 0x201C: case 0x201D: case 0x201E: case 0x201F:
    case 0x00AB: case 0x00BB: case 0x2033:
      return "\"";
    case 0x2018: case 0x2019: case 0x201A: case 0x201B: case 0x2032:
      return "'";
    case 0x2010: case 0x2011: case 0x2012: case 0x2013: case 0x2014: case 0x2015: case 0x2212:
      return "-";
    case 0x2026:
      return "...";
    default:
      return nullptr;
  }
}

std::size_t token_count(std::string_view s) { return text::split_ws(s).size(); }

}  // namespace

std::string normalize_punct_only(std::string_view input) {
  std::string out;
  out.reserve(input.size());
  for (char32_t c : text::decode(input)) {
    if (const char* r = punct_replacement(c)) out += r;
    else text::append_utf8(out, c);
  }
  return out;
}

std::string strip_nonprinting(std::string_view input) {
  std::string out;
  out.reserve(input.size());
  for (char32_t c : text::decode(input))
    if (!is_nonprinting(c)) text::append_utf8(out, c);
  return out;
}

std::string collapse_whitespace(std::string_view input) {
  std::string out;
  out.reserve(input.size());
  bool pending = false;
  for (char32_t c : text::decode(input)) {
    if (text::is_space(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    text::append_utf8(out, c);
  }
  return out;
}

std::string normalize_punct(std::string_view text) {
  return collapse_whitespace(normalize_punct_only(strip_nonprinting(text)));
}

void validate(const FilterConfig& cfg) {
  if (cfg.min_len == 0 || cfg.min_len > cfg.max_len)
    throw DataError("filter lengths must satisfy 0 < min_len <= max_len");
  if (!(cfg.max_ratio >= 1.0)) throw DataError("filter max_ratio must be >= 1");
}

void write_report(std::ostream& out, const FilterReport& r) {
  out << "input=" << r.input << '\n'
      << "kept=" << r.kept << '\n'
      << "too_short=" << r.too_short << '\n'
      << "too_long=" << r.too_long << '\n'
      << "ratio=" << r.ratio << '\n'
      << "duplicate=" << r.duplicate << '\n';
}

FilterResult filter_corpus(const ParallelCorpus& corpus, const FilterConfig& cfg) {
  validate(cfg);
  validate(corpus);
  auto clean = [&](const std::string& s) {
    if (!cfg.normalize_punct && !cfg.strip_nonprinting) return s;
    std::string t = cfg.strip_nonprinting ? strip_nonprinting(s) : s;
    if (cfg.normalize_punct) t = normalize_punct_only(t);
    return collapse_whitespace(t);
  };

  FilterResult result;
  auto& report = result.report;
  report.input = corpus.size();
  std::unordered_set<std::string> seen;
  std::vector<std::size_t> new_index(corpus.size() + 1, 0);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    new_index[i] = result.corpus.size();
    SentencePair pair{clean(corpus.pairs[i].source), clean(corpus.pairs[i].target)};
    const std::size_t ls = token_count(pair.source);
    const std::size_t lt = token_count(pair.target);
    if (ls < cfg.min_len || lt < cfg.min_len) {
      ++report.too_short;
      continue;
    }
    if (ls > cfg.max_len || lt > cfg.max_len) {
      ++report.too_long;
      continue;
    }
    if (static_cast<double>(std::max(ls, lt)) > cfg.max_ratio * static_cast<double>(std::min(ls, lt))) {
      ++report.ratio;
      continue;
    }
    if (cfg.dedupe) {
      std::string key = pair.source;
      key += '\t';
      key += pair.target;
      if (!seen.insert(std::move(key)).second) {
        ++report.duplicate;
        continue;
      }
    }
    result.corpus.pairs.push_back(std::move(pair));
  }
  new_index[corpus.size()] = result.corpus.size();
  for (const auto& doc : corpus.documents) {
    const DocumentRange mapped{new_index[doc.begin], new_index[doc.end]};
    if (mapped.begin < mapped.end) result.corpus.documents.push_back(mapped);
  }
  report.kept = result.corpus.size();
  return result;
}

}  // namespace qad::datapipe
