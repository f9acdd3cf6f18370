#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>

#include "qad/core/types.hpp"

namespace qad::datapipe {

/// Punctuation rules:
///   curly and low double quotes, guillemets, double prime -> '"'
///   curly and low single quotes, prime                    -> '\''
///   hyphen and dash variants, minus sign                  -> '-'
///   horizontal ellipsis                                   -> "..."
std::string normalize_punct_only(std::string_view text);

/// Drops control characters, soft hyphens, zero-width and bidi format
/// characters, and the BOM.
std::string strip_nonprinting(std::string_view text);

/// Whitespace runs (any Unicode space) become one ASCII space; ends trimmed.
std::string collapse_whitespace(std::string_view text);

/// strip_nonprinting, then the punctuation rules, then whitespace collapse.
/// Idempotent.
std::string normalize_punct(std::string_view text);

struct FilterConfig {
  std::size_t min_len = 1;
  std::size_t max_len = 250;
  /// Bound on longer/shorter side length in whitespace tokens.
  double max_ratio = 3.0;
  bool dedupe = true;
  bool normalize_punct = true;
  bool strip_nonprinting = true;
};

/// Throws DataError unless 0 < min_len <= max_len and max_ratio >= 1.
void validate(const FilterConfig& cfg);

struct FilterReport {
  std::size_t input = 0;
  std::size_t kept = 0;
  std::size_t too_short = 0;
  std::size_t too_long = 0;
  std::size_t ratio = 0;
  std::size_t duplicate = 0;
};

/// key=value lines in a fixed order.
void write_report(std::ostream& out, const FilterReport& report);

struct FilterResult {
  ParallelCorpus corpus;
  FilterReport report;
};

/// Normalizes each side as configured, then removes pairs by the first
/// failing rule in the order too_short, too_long, ratio, duplicate.
/// Order-preserving; surviving text is the normalized text. Document ranges
/// are remapped and emptied documents dropped.
FilterResult filter_corpus(const ParallelCorpus& corpus, const FilterConfig& cfg);

}  // namespace qad::datapipe
