#include "qad/core/nbest.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "qad/core/error.hpp"
#include "qad/text/utf8.hpp"

namespace qad {

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (text.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(value))
    throw DataError("not a finite number: '" + std::string(text) + "'");
  return value;
}

namespace {

constexpr std::string_view kDelim = "|||";

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(kDelim, pos);
    if (next == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, next - pos));
    pos = next + kDelim.size();
  }
  return fields;
}

Hypothesis parse_line(std::string_view line, std::size_t lineno, Origin origin) {
  const auto fields = split_fields(line);
  if (fields.size() != 4)
    throw ParseError("expected 4 '|||'-separated fields, found " +
                         std::to_string(fields.size()),
                     lineno);
  Hypothesis h;
  h.origin = origin;
  const auto id_text = text::trim(fields[0]);
  const auto res = std::from_chars(id_text.data(), id_text.data() + id_text.size(), h.segment_id);
  if (id_text.empty() || res.ec != std::errc() || res.ptr != id_text.data() + id_text.size() ||
      h.segment_id < 0)
    throw ParseError("bad segment id '" + std::string(id_text) + "'", lineno);
  h.text = std::string(text::trim(fields[1]));

  std::istringstream feats{std::string(fields[2])};
  std::string token;
  while (feats >> token) {
    if (token.size() < 2 || token.back() != '=')
      throw ParseError("expected 'name=' in feature list, got '" + token + "'", lineno);
    std::string name = token.substr(0, token.size() - 1);
    std::string value;
    if (!(feats >> value)) throw ParseError("feature '" + name + "' has no value", lineno);
    if (h.features.contains(name)) throw ParseError("duplicate feature '" + name + "'", lineno);
    try {
      h.features.set(name, parse_number(value));
    } catch (const DataError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  try {
    h.combined_score = parse_number(text::trim(fields[3]));
  } catch (const DataError& e) {
    throw ParseError(e.what(), lineno);
  }
  return h;
}

}  // namespace

std::vector<NBestList> parse_nbest(std::istream& in, Origin origin) {
  std::vector<NBestList> lists;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    auto h = parse_line(line, lineno, origin);
    if (!lists.empty() && h.segment_id < lists.back().segment_id)
      throw ParseError("segment ids must be non-decreasing", lineno);
    if (lists.empty() || lists.back().segment_id != h.segment_id)
      lists.push_back(NBestList{h.segment_id, {}});
    lists.back().hypotheses.push_back(std::move(h));
  }
  return lists;
}

std::vector<NBestList> parse_nbest_string(const std::string& text, Origin origin) {
  std::istringstream in(text);
  return parse_nbest(in, origin);
}

void write_nbest(std::ostream& out, const std::vector<NBestList>& lists) {
  for (const auto& list : lists) {
    for (const auto& h : list.hypotheses) {
      out << h.segment_id << " ||| " << h.text << " |||";
      for (const auto& [name, value] : h.features) out << ' ' << name << "= " << format_number(value);
      out << " ||| " << format_number(h.combined_score) << '\n';
    }
  }
}

std::string write_nbest_string(const std::vector<NBestList>& lists) {
  std::ostringstream out;
  write_nbest(out, lists);
  return out.str();
}

NBestList merge_nbest(const NBestList& a, const NBestList& b, bool dedupe) {
  if (a.segment_id != b.segment_id)
    throw DataError("cannot merge n-best lists of segments " + std::to_string(a.segment_id) +
                    " and " + std::to_string(b.segment_id));
  NBestList merged{a.segment_id, {}};
  merged.hypotheses.reserve(a.size() + b.size());
  if (!dedupe) {
    merged.hypotheses = a.hypotheses;
    merged.hypotheses.insert(merged.hypotheses.end(), b.hypotheses.begin(), b.hypotheses.end());
    return merged;
  }
  const auto better = [](const Hypothesis& cand, const Hypothesis& kept) {
    if (cand.combined_score != kept.combined_score) return cand.combined_score > kept.combined_score;
    return cand.origin == Origin::ensemble && kept.origin != Origin::ensemble;
  };
  std::unordered_map<std::string_view, std::size_t> slot;
  for (const auto* list : {&a, &b}) {
    for (const auto& h : list->hypotheses) {
      auto [it, inserted] = slot.try_emplace(h.text, merged.hypotheses.size());
      if (inserted) {
        merged.hypotheses.push_back(h);
      } else if (better(h, merged.hypotheses[it->second])) {
        merged.hypotheses[it->second] = h;
      }
    }
  }
  return merged;
}

}  // namespace qad
