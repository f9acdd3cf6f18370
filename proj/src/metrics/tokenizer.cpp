#include "qad/metrics/tokenizer.hpp"

#include "qad/text/utf8.hpp"

namespace qad::metrics {
namespace {

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

bool is_digit(char32_t c) { return c >= '0' && c <= '9'; }

// [\{-\~\[-\` -\&\(-\+\:-\@\/]
bool is_padded_symbol(char32_t c) {
  return (c >= '{' && c <= '~') || (c >= '[' && c <= '`') || (c >= ' ' && c <= '&') ||
         (c >= '(' && c <= '+') || (c >= ':' && c <= '@') || c == '/';
}

// Each rewrite below reproduces one re.sub pass: scan left to right, consume
// the match, resume after it.
std::u32string pad_symbols(const std::u32string& s) {
  std::u32string out;
  out.reserve(s.size() * 2);
  for (char32_t c : s) {
    if (is_padded_symbol(c)) {
      out.push_back(' ');
      out.push_back(c);
      out.push_back(' ');
    } else {
      out.push_back(c);
    }
  }
  return out;
}

// ([^0-9])([\.,]) -> \1 \2 (space after)
std::u32string split_period_comma_after_nondigit(const std::u32string& s) {
  std::u32string out;
  out.reserve(s.size() * 2);
  std::size_t i = 0;
  while (i < s.size()) {
    if (i + 1 < s.size() && !is_digit(s[i]) && (s[i + 1] == '.' || s[i + 1] == ',')) {
      out.push_back(s[i]);
      out.push_back(' ');
      out.push_back(s[i + 1]);
      out.push_back(' ');
      i += 2;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

// ([\.,])([^0-9]) -> " \1 \2"
std::u32string split_period_comma_before_nondigit(const std::u32string& s) {
  std::u32string out;
  out.reserve(s.size() * 2);
  std::size_t i = 0;
  while (i < s.size()) {
    if (i + 1 < s.size() && (s[i] == '.' || s[i] == ',') && !is_digit(s[i + 1])) {
      out.push_back(' ');
      out.push_back(s[i]);
      out.push_back(' ');
      out.push_back(s[i + 1]);
      i += 2;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

// ([0-9])(-) -> \1 \2 (space after)
std::u32string split_dash_after_digit(const std::u32string& s) {
  std::u32string out;
  out.reserve(s.size() * 2);
  std::size_t i = 0;
  while (i < s.size()) {
    if (i + 1 < s.size() && is_digit(s[i]) && s[i + 1] == '-') {
      out.push_back(s[i]);
      out.push_back(' ');
      out.push_back('-');
      out.push_back(' ');
      i += 2;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> tokenize_13a_tokens(std::string_view line) {
  std::string s(line);
  replace_all(s, "<skipped>", "");
  replace_all(s, "-\n", "");
  replace_all(s, "\n", " ");
  if (s.find('&') != std::string::npos) {
    replace_all(s, "&quot;", "\"");
    replace_all(s, "&amp;", "&");
    replace_all(s, "&lt;", "<");
    replace_all(s, "&gt;", ">");
  }
  std::u32string cps = U" " + text::decode(s) + U" ";
  cps = pad_symbols(cps);
  cps = split_period_comma_after_nondigit(cps);
  cps = split_period_comma_before_nondigit(cps);
  cps = split_dash_after_digit(cps);
  return text::split_ws(text::encode(cps));
}

std::string tokenize_13a(std::string_view line) {
  return text::join(tokenize_13a_tokens(line), " ");
}

}  // namespace qad::metrics
