#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qad/core/types.hpp"

namespace qad::io {

/// Reads LF-separated lines; a trailing CR is stripped, a final empty line is not
/// reported. Throws DataError if the file cannot be opened.
std::vector<std::string> read_lines(const std::filesystem::path& path);
std::vector<std::string> read_lines(std::istream& in);
void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines);

std::string read_file(const std::filesystem::path& path);

/// N-best file; parse errors are prefixed with the path.
std::vector<NBestList> read_nbest(const std::filesystem::path& path, Origin origin = Origin::other);
void write_file(const std::filesystem::path& path, const std::string& content);

/// `name<TAB>value` per line.
WeightVector parse_weights(std::istream& in);
WeightVector read_weights(const std::filesystem::path& path);
void write_weights(std::ostream& out, const WeightVector& weights);

/// One real per line.
std::vector<double> read_reals(const std::filesystem::path& path);

ParallelCorpus read_tsv_corpus(const std::filesystem::path& path);
ParallelCorpus read_corpus(const std::filesystem::path& source,
                           const std::filesystem::path& target);
void write_tsv_corpus(std::ostream& out, const ParallelCorpus& corpus);

/// `begin end` per line (half-open).
std::vector<DocumentRange> read_document_ranges(const std::filesystem::path& path);

}  // namespace qad::io
