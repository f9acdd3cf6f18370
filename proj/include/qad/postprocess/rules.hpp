#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qad::postprocess {

enum class Language { cs, uk, other };

Language parse_language(std::string_view code);

/// Rules in application order.
enum class Rule { emoji, quotes, capitalization, terminal_punct, ellipsis, bullets, repeats };

inline constexpr std::size_t kRuleCount = 7;
inline constexpr std::array<Rule, kRuleCount> kAllRules{
    Rule::emoji,    Rule::quotes,  Rule::capitalization, Rule::terminal_punct,
    Rule::ellipsis, Rule::bullets, Rule::repeats};

/// "r1".."r7".
std::string_view rule_id(Rule rule);
Rule parse_rule(std::string_view id);

/// Source token index to hypothesis token index (whitespace tokens).
using Alignment = std::vector<std::pair<std::size_t, std::size_t>>;

/// One line of `i-j` pairs.
Alignment parse_alignment(std::string_view line);

struct PostprocessConfig {
  Language language = Language::other;
  std::array<bool, kRuleCount> enabled{true, true, true, true, true, true, true};
  std::optional<Alignment> alignment;

  /// Enables exactly the listed rules.
  void set_rules(const std::vector<Rule>& rules);
};

struct RuleStep {
  Rule rule;
  std::string before;
  std::string after;
};

/// Always one entry per rule, in order; disabled rules leave text unchanged.
std::vector<RuleStep> rule_trace(std::string_view source, std::string_view hypothesis,
                                 const PostprocessConfig& cfg);

std::string apply_rules(std::string_view source, std::string_view hypothesis,
                        const PostprocessConfig& cfg);

// Individual rules. Each leaves a blank hypothesis unchanged.

/// Inserts emoji occurring more often in the source than in the hypothesis.
/// Placement follows the alignment of the emoji's source token (or the
/// preceding token), else the proportional character position snapped to the
/// nearest token edge. Emoji are inserted as separate tokens together with
/// any variation selector or skin-tone modifier that follows them.
std::string transfer_emoji(std::string_view source, std::string_view hypothesis,
                           const std::optional<Alignment>& alignment);
/// Straight double quotes paired left to right: „…“ for cs, «…» for uk.
std::string restore_quotes(std::string_view hypothesis, Language language);
std::string restore_capitalization(std::string_view source, std::string_view hypothesis);
/// If the source ends with . ! or ?, the hypothesis ends likewise. A trailing
/// run of . ! ? … in the hypothesis is replaced; a final … counts as a period.
std::string restore_terminal_punct(std::string_view source, std::string_view hypothesis);
std::string replace_ellipsis(std::string_view hypothesis);
/// Source prefixes `-`, `•`, `*`, `N.` or `N)` followed by whitespace.
std::string restore_bullet(std::string_view source, std::string_view hypothesis);
/// Collapses runs of identical tokens. Tokens containing emoji are kept.
std::string collapse_repeats(std::string_view hypothesis);

}  // namespace qad::postprocess
