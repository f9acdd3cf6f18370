#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qad::metrics {

/// mteval-v13a tokenization as implemented by sacreBLEU: entity unescaping,
/// ASCII punctuation padding, period/comma/dash rules around digits, then a
/// whitespace split. Returns the tokens joined by single spaces.
std::string tokenize_13a(std::string_view line);

std::vector<std::string> tokenize_13a_tokens(std::string_view line);

}  // namespace qad::metrics
