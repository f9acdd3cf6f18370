#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qad/core/types.hpp"

namespace qad {

/// Reads `id ||| text ||| name= value ... ||| score` lines, grouping consecutive
/// lines by segment id. Ids must be non-decreasing. Throws ParseError.
std::vector<NBestList> parse_nbest(std::istream& in, Origin origin = Origin::other);
std::vector<NBestList> parse_nbest_string(const std::string& text,
                                          Origin origin = Origin::other);

void write_nbest(std::ostream& out, const std::vector<NBestList>& lists);
std::string write_nbest_string(const std::vector<NBestList>& lists);

/// Concatenates b after a. With dedupe, identical texts collapse to the
/// hypothesis with the higher combined score (then origin ensemble, then the
/// earlier one), kept at the position of the first occurrence.
NBestList merge_nbest(const NBestList& a, const NBestList& b, bool dedupe);

/// Shortest decimal representation that parses back to the same double.
std::string format_number(double value);
/// Strict finite-double parse; throws DataError.
double parse_number(std::string_view text);

}  // namespace qad
