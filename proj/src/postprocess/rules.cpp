#include "qad/postprocess/rules.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qad/core/error.hpp"
#include "qad/text/unicode.hpp"
#include "qad/text/utf8.hpp"

namespace qad::postprocess {

namespace {

constexpr std::array<std::string_view, kRuleCount> kRuleIds{"r1", "r2", "r3", "r4",
                                                            "r5", "r6", "r7"};

// Code-point spans of whitespace-separated tokens.
struct TokenSpan {
  std::size_t begin;
  std::size_t end;
};

std::vector<TokenSpan> token_spans(const std::u32string& s) {
  std::vector<TokenSpan> spans;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && text::is_space(s[i])) ++i;
    if (i == s.size()) break;
    const std::size_t b = i;
    while (i < s.size() && !text::is_space(s[i])) ++i;
    spans.push_back({b, i});
  }
  return spans;
}

bool is_blank(std::string_view s) {
  for (char32_t c : text::decode(s))
    if (!text::is_space(c)) return false;
  return true;
}

bool is_emoji_modifier(char32_t c) {
  return c == 0xFE0F || c == 0xFE0E || (c >= 0x1F3FB && c <= 0x1F3FF);
}

bool is_terminal(char32_t c) { return c == U'.' || c == U'!' || c == U'?' || c == U'…'; }

std::size_t rtrim_end(const std::u32string& s) {
  std::size_t end = s.size();
  while (end > 0 && text::is_space(s[end - 1])) --end;
  return end;
}

std::size_t ltrim_begin(const std::u32string& s) {
  std::size_t b = 0;
  while (b < s.size() && text::is_space(s[b])) ++b;
  return b;
}

}  // namespace

Language parse_language(std::string_view code) {
  if (code == "cs") return Language::cs;
  if (code == "uk") return Language::uk;
  return Language::other;
}

std::string_view rule_id(Rule rule) { return kRuleIds[static_cast<std::size_t>(rule)]; }

Rule parse_rule(std::string_view id) {
  for (std::size_t i = 0; i < kRuleCount; ++i)
    if (kRuleIds[i] == id) return static_cast<Rule>(i);
  throw DataError("unknown post-processing rule '" + std::string(id) + "' (expected r1..r7)");
}

Alignment parse_alignment(std::string_view line) {
  Alignment out;
  for (const auto& item : text::split_ws(line)) {
    const auto dash = item.find('-');
    auto number = [&](std::string_view digits) {
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos)
        throw DataError("malformed alignment pair '" + item + "'");
      return static_cast<std::size_t>(std::stoull(std::string(digits)));
    };
    if (dash == std::string::npos) throw DataError("malformed alignment pair '" + item + "'");
    out.emplace_back(number(std::string_view(item).substr(0, dash)),
                     number(std::string_view(item).substr(dash + 1)));
  }
  return out;
}

void PostprocessConfig::set_rules(const std::vector<Rule>& rules) {
  enabled.fill(false);
  for (auto r : rules) enabled[static_cast<std::size_t>(r)] = true;
}

// --- rule 1 -----------------------------------------------------------------

std::string transfer_emoji(std::string_view source, std::string_view hypothesis,
                           const std::optional<Alignment>& alignment) {
  if (is_blank(hypothesis)) return std::string(hypothesis);
  const auto src = text::decode(source);
  const auto hyp = text::decode(hypothesis);

  std::map<char32_t, std::size_t> available;
  for (char32_t c : hyp)
    if (text::is_emoji(c)) ++available[c];

  const auto src_tokens = token_spans(src);
  const auto hyp_tokens = token_spans(hyp);

  // Insertion at a token edge: before token t (at its start) or after token t.
  struct Insertion {
    std::size_t position;
    bool at_start;
    std::u32string text;
  };
  std::vector<Insertion> inserts;

  auto after_token = [&](std::size_t t) { return Insertion{hyp_tokens[t].end, false, {}}; };
  auto aligned_max = [&](std::size_t source_token) -> std::optional<std::size_t> {
    if (!alignment) return std::nullopt;
    std::optional<std::size_t> best;
    for (const auto& [i, j] : *alignment)
      if (i == source_token && j < hyp_tokens.size() && (!best || j > *best)) best = j;
    return best;
  };

  for (std::size_t k = 0; k < src.size(); ++k) {
    const char32_t c = src[k];
    if (!text::is_emoji(c)) continue;
    if (auto it = available.find(c); it != available.end() && it->second > 0) {
      --it->second;
      continue;
    }
    std::u32string emoji(1, c);
    for (std::size_t m = k + 1; m < src.size() && is_emoji_modifier(src[m]); ++m) emoji += src[m];

    std::optional<Insertion> ins;
    std::size_t token = 0;
    while (token < src_tokens.size() && src_tokens[token].end <= k) ++token;
    if (auto j = aligned_max(token)) ins = after_token(*j);
    else if (token > 0)
      if (auto j2 = aligned_max(token - 1)) ins = after_token(*j2);
    if (!ins) {
      const double target =
          static_cast<double>(k) * static_cast<double>(hyp.size()) / static_cast<double>(src.size());
      double best_distance = INFINITY;
      for (const auto& span : hyp_tokens) {
        for (bool start : {true, false}) {
          const std::size_t pos = start ? span.begin : span.end;
          const double d = std::abs(static_cast<double>(pos) - target);
          if (d < best_distance) {
            best_distance = d;
            ins = Insertion{pos, start, {}};
          }
        }
      }
    }
    ins->text = std::move(emoji);
    inserts.push_back(std::move(*ins));
  }
  if (inserts.empty()) return std::string(hypothesis);

  std::stable_sort(inserts.begin(), inserts.end(),
                   [](const Insertion& a, const Insertion& b) { return a.position < b.position; });
  std::u32string out;
  std::size_t next = 0;
  for (std::size_t pos = 0; pos <= hyp.size(); ++pos) {
    for (; next < inserts.size() && inserts[next].position == pos; ++next) {
      if (inserts[next].at_start) {
        out += inserts[next].text;
        out += U' ';
      } else {
        out += U' ';
        out += inserts[next].text;
      }
    }
    if (pos < hyp.size()) out += hyp[pos];
  }
  return text::encode(out);
}

// --- rule 2 -----------------------------------------------------------------

std::string restore_quotes(std::string_view hypothesis, Language language) {
  if (language == Language::other) return std::string(hypothesis);
  const char* open = language == Language::cs ? "„" : "«";
  const char* close = language == Language::cs ? "“" : "»";
  const auto quotes = static_cast<std::size_t>(std::count(hypothesis.begin(), hypothesis.end(), '"'));
  const std::size_t paired = quotes - quotes % 2;
  std::string out;
  std::size_t seen = 0;
  for (char c : hypothesis) {
    if (c == '"' && seen < paired) {
      out += seen % 2 == 0 ? open : close;
      ++seen;
    } else {
      out += c;
    }
  }
  return out;
}

// --- rule 3 -----------------------------------------------------------------

std::string restore_capitalization(std::string_view source, std::string_view hypothesis) {
  if (is_blank(hypothesis)) return std::string(hypothesis);
  const auto src = text::decode(source);
  bool any_letter = false;
  bool all_upper = true;
  char32_t first_letter = 0;
  for (char32_t c : src) {
    if (!text::is_letter(c)) continue;
    if (!any_letter) first_letter = c;
    any_letter = true;
    if (text::is_lower(c)) all_upper = false;
  }
  if (!any_letter) return std::string(hypothesis);
  bool has_upper = false;
  for (char32_t c : src) has_upper |= text::is_upper(c);
  if (all_upper && has_upper) return text::to_upper(hypothesis);
  if (!text::is_upper(first_letter)) return std::string(hypothesis);
  auto hyp = text::decode(hypothesis);
  for (auto& c : hyp) {
    if (!text::is_letter(c)) continue;
    if (text::is_lower(c)) c = text::to_upper(c);
    break;
  }
  return text::encode(hyp);
}

// --- rule 4 -----------------------------------------------------------------

std::string restore_terminal_punct(std::string_view source, std::string_view hypothesis) {
  if (is_blank(hypothesis)) return std::string(hypothesis);
  const auto src = text::decode(source);
  const std::size_t src_end = rtrim_end(src);
  if (src_end == 0) return std::string(hypothesis);
  const char32_t mark = src[src_end - 1];
  if (mark != U'.' && mark != U'!' && mark != U'?') return std::string(hypothesis);

  auto hyp = text::decode(hypothesis);
  const std::size_t end = rtrim_end(hyp);
  const char32_t last = hyp[end - 1];
  if (last == mark || (mark == U'.' && last == U'…')) return std::string(hypothesis);
  std::size_t run = end;
  while (run > 0 && is_terminal(hyp[run - 1])) --run;
  hyp.replace(run, end - run, 1, mark);
  return text::encode(hyp);
}

// --- rule 5 -----------------------------------------------------------------

std::string replace_ellipsis(std::string_view hypothesis) {
  std::string out;
  out.reserve(hypothesis.size());
  for (std::size_t i = 0; i < hypothesis.size();) {
    if (hypothesis.compare(i, 3, "...") == 0) {
      out += "…";
      i += 3;
    } else {
      out += hypothesis[i++];
    }
  }
  return out;
}

// --- rule 6 -----------------------------------------------------------------

namespace {

// Length in code points of a bullet marker at `from`, when followed by whitespace.
std::size_t bullet_length(const std::u32string& s, std::size_t from) {
  if (from >= s.size()) return 0;
  std::size_t len = 0;
  const char32_t c = s[from];
  if (c == U'-' || c == U'•' || c == U'*') {
    len = 1;
  } else {
    std::size_t i = from;
    while (i < s.size() && s[i] >= U'0' && s[i] <= U'9') ++i;
    if (i == from || i >= s.size() || (s[i] != U'.' && s[i] != U')')) return 0;
    len = i + 1 - from;
  }
  if (from + len >= s.size() || !text::is_space(s[from + len])) return 0;
  return len;
}

}  // namespace

std::string restore_bullet(std::string_view source, std::string_view hypothesis) {
  if (is_blank(hypothesis)) return std::string(hypothesis);
  const auto src = text::decode(source);
  const std::size_t sb = ltrim_begin(src);
  const std::size_t len = bullet_length(src, sb);
  if (len == 0) return std::string(hypothesis);
  const auto marker = src.substr(sb, len);
  auto hyp = text::decode(hypothesis);
  const std::size_t hb = ltrim_begin(hyp);
  if (hyp.compare(hb, len, marker) == 0 && hb + len < hyp.size() && text::is_space(hyp[hb + len]))
    return std::string(hypothesis);
  hyp.insert(hb, marker + U" ");
  return text::encode(hyp);
}

// --- rule 7 -----------------------------------------------------------------

std::string collapse_repeats(std::string_view hypothesis) {
  const auto hyp = text::decode(hypothesis);
  const auto spans = token_spans(hyp);
  auto token = [&](std::size_t t) {
    return std::u32string_view(hyp).substr(spans[t].begin, spans[t].end - spans[t].begin);
  };
  auto has_emoji = [&](std::size_t t) {
    const auto tok = token(t);
    return std::any_of(tok.begin(), tok.end(), [](char32_t c) { return text::is_emoji(c); });
  };
  std::u32string out;
  std::size_t copied = 0;
  for (std::size_t t = 1; t < spans.size(); ++t) {
    if (token(t) != token(t - 1) || has_emoji(t)) continue;
    // Drop the whitespace before the repeat and the repeat itself.
    out.append(hyp, copied, spans[t - 1].end - copied);
    copied = spans[t].end;
  }
  if (copied == 0) return std::string(hypothesis);
  out.append(hyp, copied, std::u32string::npos);
  return text::encode(out);
}

// --- pipeline ---------------------------------------------------------------

std::vector<RuleStep> rule_trace(std::string_view source, std::string_view hypothesis,
                                 const PostprocessConfig& cfg) {
  std::vector<RuleStep> steps;
  std::string current(hypothesis);
  for (Rule rule : kAllRules) {
    RuleStep step{rule, current, current};
    if (cfg.enabled[static_cast<std::size_t>(rule)]) {
      switch (rule) {
        case Rule::emoji: step.after = transfer_emoji(source, current, cfg.alignment); break;
        case Rule::quotes: step.after = restore_quotes(current, cfg.language); break;
        case Rule::capitalization: step.after = restore_capitalization(source, current); break;
        case Rule::terminal_punct: step.after = restore_terminal_punct(source, current); break;
        case Rule::ellipsis: step.after = replace_ellipsis(current); break;
        case Rule::bullets: step.after = restore_bullet(source, current); break;
        case Rule::repeats: step.after = collapse_repeats(current); break;
      }
    }
    current = step.after;
    steps.push_back(std::move(step));
  }
  return steps;
}

std::string apply_rules(std::string_view source, std::string_view hypothesis,
                        const PostprocessConfig& cfg) {
  return rule_trace(source, hypothesis, cfg).back().after;
}

}  // namespace qad::postprocess
