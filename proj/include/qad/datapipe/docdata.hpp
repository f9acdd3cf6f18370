#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qad/core/error.hpp"
#include "qad/core/types.hpp"

namespace qad::datapipe {

inline constexpr std::string_view kSepTag = "<SEP>";
inline constexpr std::string_view kSepJoin = " <SEP> ";

enum class DocMode { curr, prev_curr, window_50t, window_100t, window_250t, window_500t };

inline constexpr DocMode kAllDocModes[] = {DocMode::curr,        DocMode::prev_curr,
                                           DocMode::window_50t,  DocMode::window_100t,
                                           DocMode::window_250t, DocMode::window_500t};

DocMode parse_doc_mode(std::string_view name);
std::string_view doc_mode_name(DocMode mode);
/// Source token budget of a window mode, 0 otherwise.
std::size_t window_budget(DocMode mode);

struct DocSample {
  std::string source;
  std::string target;
  std::size_t sentence_count = 1;
  /// Corpus index of the first sentence.
  std::size_t first = 0;
  std::size_t source_tokens = 0;
  std::size_t target_tokens = 0;
  /// A single sentence longer than the window budget.
  bool over_budget = false;

  DocumentRange range() const { return {first, first + sentence_count}; }
};

/// Counts tokens of one sentence, e.g. after subword encoding.
using TokenCounter = std::function<std::size_t(std::string_view)>;

std::size_t whitespace_token_count(std::string_view text);

/// Per-sentence token counts, aligned with the corpus.
struct SentenceLengths {
  std::vector<std::size_t> source;
  std::vector<std::size_t> target;
};

SentenceLengths measure(const ParallelCorpus& corpus, const TokenCounter& counter);

struct DocDataset {
  std::vector<DocSample> samples;
  std::size_t over_budget = 0;
  /// Window samples whose target side exceeds the budget.
  std::size_t target_overflow = 0;
};

/// Builds samples document by document. Window modes pack consecutive
/// sentences greedily while the source token sum stays within the budget.
/// prev_curr pairs each sentence with its predecessor; a document's first
/// sentence is emitted alone. Throws DataError on invalid document ranges or
/// length vectors that do not match the corpus.
DocDataset build_doc_dataset(const ParallelCorpus& corpus, DocMode mode,
                             const SentenceLengths& lengths);
DocDataset build_doc_dataset(const ParallelCorpus& corpus, DocMode mode,
                             const TokenCounter& counter = whitespace_token_count);

/// All sentences shuffled into one document, for the synthetic
/// random-concatenation regime.
ParallelCorpus synthetic_shuffle(const ParallelCorpus& corpus, std::uint64_t seed);

/// Concatenates datasets and shuffles the samples with a seeded generator.
std::vector<DocSample> merge_datasets(std::span<const DocDataset> datasets, std::uint64_t seed);

std::string join_sentences(std::span<const std::string> sentences);

class SeparatorCountError : public DataError {
 public:
  SeparatorCountError(std::size_t expected, std::size_t actual);
  std::size_t expected() const noexcept { return expected_; }
  std::size_t actual() const noexcept { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

/// Splits on the separator tag and trims each part. Throws
/// SeparatorCountError when the number of parts differs from `expected`.
std::vector<std::string> split_doc_hypothesis(std::string_view text, std::size_t expected);

struct DocNbestReport {
  std::size_t hypotheses = 0;
  std::size_t kept = 0;
  std::size_t discarded = 0;
};

struct SentenceNbest {
  /// One list per corpus sentence, segment id = sentence index.
  std::vector<NBestList> lists;
  DocNbestReport report;
};

/// Maps document-level n-best lists (segment id = chunk index) to sentence
/// lists. Each part inherits the hypothesis's features and score, with origin
/// document. Hypotheses with the wrong sentence count are discarded.
SentenceNbest split_doc_nbest(std::span<const NBestList> doc_lists,
                              std::span<const DocumentRange> chunks);

}  // namespace qad::datapipe
