#include "qad/core/io.hpp"

#include <fstream>
#include <sstream>

#include "qad/core/error.hpp"
#include "qad/core/nbest.hpp"
#include "qad/text/utf8.hpp"

namespace qad::io {

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::size_t parse_index(std::string_view text, const std::filesystem::path& path,
                        std::size_t lineno) {
  try {
    const double v = parse_number(text);
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) throw DataError("");
    return static_cast<std::size_t>(v);
  } catch (const DataError&) {
    throw ParseError(path.string() + ": expected a non-negative integer, got '" +
                         std::string(text) + "'",
                     lineno);
  }
}

}  // namespace

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_lines(in);
}

std::vector<NBestList> read_nbest(const std::filesystem::path& path, Origin origin) {
  auto in = open_in(path);
  try {
    return parse_nbest(in, origin);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.detail(), e.line());
  }
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  auto out = open_out(path);
  for (const auto& line : lines) out << line << '\n';
}

std::string read_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
}

WeightVector parse_weights(std::istream& in) {
  WeightVector weights;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(in)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected 'name<TAB>value'", lineno);
    const std::string name(text::trim(std::string_view(line).substr(0, tab)));
    if (name.empty()) throw ParseError("empty feature name", lineno);
    try {
      weights[name] = parse_number(text::trim(std::string_view(line).substr(tab + 1)));
    } catch (const DataError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return weights;
}

WeightVector read_weights(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return parse_weights(in);
  } catch (const ParseError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_weights(std::ostream& out, const WeightVector& weights) {
  for (const auto& [name, value] : weights) out << name << '\t' << format_number(value) << '\n';
}

std::vector<double> read_reals(const std::filesystem::path& path) {
  std::vector<double> values;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(path)) {
    ++lineno;
    try {
      values.push_back(parse_number(text::trim(line)));
    } catch (const DataError& e) {
      throw ParseError(path.string() + ": " + e.what(), lineno);
    }
  }
  return values;
}

ParallelCorpus read_tsv_corpus(const std::filesystem::path& path) {
  ParallelCorpus corpus;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(path)) {
    ++lineno;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
      throw ParseError(path.string() + ": expected 'source<TAB>target'", lineno);
    corpus.pairs.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  return corpus;
}

ParallelCorpus read_corpus(const std::filesystem::path& source,
                           const std::filesystem::path& target) {
  auto src = read_lines(source);
  auto tgt = read_lines(target);
  if (src.size() != tgt.size())
    throw DataError("'" + source.string() + "' has " + std::to_string(src.size()) +
                    " lines but '" + target.string() + "' has " + std::to_string(tgt.size()));
  ParallelCorpus corpus;
  corpus.pairs.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i)
    corpus.pairs.push_back({std::move(src[i]), std::move(tgt[i])});
  return corpus;
}

void write_tsv_corpus(std::ostream& out, const ParallelCorpus& corpus) {
  for (const auto& p : corpus.pairs) out << p.source << '\t' << p.target << '\n';
}

std::vector<DocumentRange> read_document_ranges(const std::filesystem::path& path) {
  std::vector<DocumentRange> ranges;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(path)) {
    ++lineno;
    const auto fields = text::split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() != 2) throw ParseError(path.string() + ": expected 'start end'", lineno);
    ranges.push_back({parse_index(fields[0], path, lineno), parse_index(fields[1], path, lineno)});
  }
  return ranges;
}

}  // namespace qad::io
