#pragma once

#include <string>
#include <string_view>

namespace qad::text {

// Case mapping covers Latin (Basic, Latin-1, Extended-A/B), Greek and
// Cyrillic, which is what the supported language pairs need.
bool is_letter(char32_t cp);
bool is_upper(char32_t cp);
bool is_lower(char32_t cp);
char32_t to_upper(char32_t cp);
char32_t to_lower(char32_t cp);

std::string to_upper(std::string_view utf8);
std::string to_lower(std::string_view utf8);

/// Extended_Pictographic property (emoji-data 13.0 range table).
bool is_emoji(char32_t cp);
inline constexpr std::string_view kEmojiTableVersion = "emoji-data 13.0";

}  // namespace qad::text
