#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qad::text {

/// Decodes UTF-8 into Unicode scalar values. Invalid bytes decode to U+FFFD.
std::u32string decode(std::string_view utf8);

std::string encode(std::u32string_view cps);
void append_utf8(std::string& out, char32_t cp);

/// Number of scalar values in a UTF-8 string.
std::size_t length(std::string_view utf8);

/// Whitespace as understood by Python's str.split() (the set sacreBLEU relies on).
bool is_space(char32_t cp);

/// Splits on runs of whitespace, dropping empty fields.
std::vector<std::string> split_ws(std::string_view utf8);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string_view trim(std::string_view s);

}  // namespace qad::text
