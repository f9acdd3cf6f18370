#include "qad/text/unicode.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "qad/text/utf8.hpp"

namespace qad::text {
namespace {

// Blocks where upper/lower case alternate on even/odd code points.
struct AlternatingBlock {
  char32_t first;
  char32_t last;
  bool upper_is_even;
};

constexpr std::array<AlternatingBlock, 13> kAlternating{{
    {0x0100, 0x012F, true},  {0x0132, 0x0137, true},  {0x0139, 0x0148, false},
    {0x014A, 0x0177, true},  {0x0179, 0x017E, false}, {0x01DE, 0x01EF, true},
    {0x01F8, 0x021F, true},  {0x0460, 0x0481, true},  {0x048A, 0x04BF, true},
    {0x04C1, 0x04CE, false}, {0x04D0, 0x04FF, true},  {0x0500, 0x052F, true},
    {0x1E00, 0x1EFF, true},
}};

const AlternatingBlock* alternating(char32_t cp) {
  for (const auto& b : kAlternating)
    if (cp >= b.first && cp <= b.last) return &b;
  return nullptr;
}

// Simple one-to-one mappings outside the regular blocks.
constexpr std::array<std::pair<char32_t, char32_t>, 12> kUpperLowerPairs{{
    {0x0178, 0x00FF}, {0x0130, 0x0069}, {0x0049, 0x0131}, {0x0386, 0x03AC},
    {0x0388, 0x03AD}, {0x0389, 0x03AE}, {0x038A, 0x03AF}, {0x038C, 0x03CC},
    {0x038E, 0x03CD}, {0x038F, 0x03CE}, {0x04C0, 0x04CF}, {0x03A3, 0x03C2},
}};

}  // namespace

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp < 0x80) return cp;
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
  if (cp >= 0x0391 && cp <= 0x03A9 && cp != 0x03A2) return cp + 0x20;
  if (cp >= 0x0410 && cp <= 0x042F) return cp + 0x20;
  if (cp >= 0x0400 && cp <= 0x040F) return cp + 0x50;
  if (cp == 0x0130) return 0x0069;
  if (cp == 0x0131) return cp;
  for (const auto& [u, l] : kUpperLowerPairs)
    if (cp == u && u != 0x0049 && u != 0x03A3) return l;
  if (const auto* b = alternating(cp)) {
    const bool even = (cp % 2) == 0;
    if (even == b->upper_is_even) return cp + 1;
  }
  return cp;
}

char32_t to_upper(char32_t cp) {
  if (cp >= 'a' && cp <= 'z') return cp - 0x20;
  if (cp < 0x80) return cp;
  if (cp >= 0x00E0 && cp <= 0x00FE && cp != 0x00F7) return cp - 0x20;
  if (cp >= 0x03B1 && cp <= 0x03C9 && cp != 0x03C2) return cp - 0x20;
  if (cp >= 0x0430 && cp <= 0x044F) return cp - 0x20;
  if (cp >= 0x0450 && cp <= 0x045F) return cp - 0x50;
  if (cp == 0x0069) return cp;
  for (const auto& [u, l] : kUpperLowerPairs)
    if (cp == l && l != 0x0069) return u;
  if (const auto* b = alternating(cp)) {
    const bool even = (cp % 2) == 0;
    if (even != b->upper_is_even) return cp - 1;
  }
  return cp;
}

bool is_upper(char32_t cp) { return to_lower(cp) != cp || cp == 0x0130; }

bool is_lower(char32_t cp) {
  return to_upper(cp) != cp || cp == 0x00DF || cp == 0x0138 || cp == 0x0149 ||
         cp == 0x017F;
}

bool is_letter(char32_t cp) {
  if ((cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z')) return true;
  if (cp < 0x80) return false;
  if (cp == 0x00AA || cp == 0x00B5 || cp == 0x00BA) return true;
  if (cp >= 0x00C0 && cp <= 0x024F) return cp != 0x00D7 && cp != 0x00F7;
  if (cp >= 0x0250 && cp <= 0x02AF) return true;
  if (cp >= 0x0370 && cp <= 0x03FF)
    return cp == 0x0386 || (cp >= 0x0388 && cp != 0x03F6 && cp != 0x038B &&
                            cp != 0x038D && cp != 0x03A2);
  if (cp >= 0x0400 && cp <= 0x0481) return true;
  if (cp >= 0x048A && cp <= 0x052F) return true;
  if (cp >= 0x0531 && cp <= 0x0587) return true;
  if (cp >= 0x05D0 && cp <= 0x05EA) return true;
  if (cp >= 0x0620 && cp <= 0x064A) return true;
  if (cp >= 0x1E00 && cp <= 0x1EFF) return true;
  if (cp >= 0x3041 && cp <= 0x30FF) return cp != 0x30A0 && cp != 0x30FB;
  if (cp >= 0x4E00 && cp <= 0x9FFF) return true;
  if (cp >= 0xAC00 && cp <= 0xD7A3) return true;
  return false;
}

std::string to_upper(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : decode(s)) append_utf8(out, to_upper(cp));
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : decode(s)) append_utf8(out, to_lower(cp));
  return out;
}

namespace {

constexpr std::array<std::pair<char32_t, char32_t>, 78> kPictographic{{
    {0x00A9, 0x00A9},   {0x00AE, 0x00AE},   {0x203C, 0x203C},   {0x2049, 0x2049},
    {0x2122, 0x2122},   {0x2139, 0x2139},   {0x2194, 0x2199},   {0x21A9, 0x21AA},
    {0x231A, 0x231B},   {0x2328, 0x2328},   {0x2388, 0x2388},   {0x23CF, 0x23CF},
    {0x23E9, 0x23F3},   {0x23F8, 0x23FA},   {0x24C2, 0x24C2},   {0x25AA, 0x25AB},
    {0x25B6, 0x25B6},   {0x25C0, 0x25C0},   {0x25FB, 0x25FE},   {0x2600, 0x2605},
    {0x2607, 0x2612},   {0x2614, 0x2685},   {0x2690, 0x2705},   {0x2708, 0x2712},
    {0x2714, 0x2714},   {0x2716, 0x2716},   {0x271D, 0x271D},   {0x2721, 0x2721},
    {0x2728, 0x2728},   {0x2733, 0x2734},   {0x2744, 0x2744},   {0x2747, 0x2747},
    {0x274C, 0x274C},   {0x274E, 0x274E},   {0x2753, 0x2755},   {0x2757, 0x2757},
    {0x2763, 0x2767},   {0x2795, 0x2797},   {0x27A1, 0x27A1},   {0x27B0, 0x27B0},
    {0x27BF, 0x27BF},   {0x2934, 0x2935},   {0x2B05, 0x2B07},   {0x2B1B, 0x2B1C},
    {0x2B50, 0x2B50},   {0x2B55, 0x2B55},   {0x3030, 0x3030},   {0x303D, 0x303D},
    {0x3297, 0x3297},   {0x3299, 0x3299},   {0x1F000, 0x1F0FF}, {0x1F10D, 0x1F10F},
    {0x1F12F, 0x1F12F}, {0x1F16C, 0x1F171}, {0x1F17E, 0x1F17F}, {0x1F18E, 0x1F18E},
    {0x1F191, 0x1F19A}, {0x1F1AD, 0x1F1E5}, {0x1F201, 0x1F20F}, {0x1F21A, 0x1F21A},
    {0x1F22F, 0x1F22F}, {0x1F232, 0x1F23A}, {0x1F23C, 0x1F23F}, {0x1F249, 0x1F3FA},
    {0x1F400, 0x1F53D}, {0x1F546, 0x1F64F}, {0x1F680, 0x1F6FF}, {0x1F774, 0x1F77F},
    {0x1F7D5, 0x1F7FF}, {0x1F80C, 0x1F80F}, {0x1F848, 0x1F84F}, {0x1F85A, 0x1F85F},
    {0x1F888, 0x1F88F}, {0x1F8AE, 0x1F8FF}, {0x1F90C, 0x1F93A}, {0x1F93C, 0x1F945},
    {0x1F947, 0x1FAFF}, {0x1FC00, 0x1FFFD},
}};

}  // namespace

bool is_emoji(char32_t cp) {
  const auto it = std::upper_bound(
      kPictographic.begin(), kPictographic.end(), cp,
      [](char32_t v, const auto& range) { return v < range.first; });
  if (it == kPictographic.begin()) return false;
  return cp <= std::prev(it)->second;
}

}  // namespace qad::text
