#include "qad/datapipe/docdata.hpp"

#include <algorithm>
#include <random>

#include "qad/text/utf8.hpp"

namespace qad::datapipe {

namespace {

constexpr std::string_view kModeNames[] = {"curr",        "prev_curr",   "window_50t",
                                           "window_100t", "window_250t", "window_500t"};

std::string join_side(const ParallelCorpus& corpus, std::size_t begin, std::size_t end,
                      bool source) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += kSepJoin;
    out += source ? corpus.pairs[i].source : corpus.pairs[i].target;
  }
  return out;
}

}  // namespace

DocMode parse_doc_mode(std::string_view name) {
  for (auto mode : kAllDocModes)
    if (doc_mode_name(mode) == name) return mode;
  throw DataError("unknown document mode '" + std::string(name) + "'");
}

std::string_view doc_mode_name(DocMode mode) { return kModeNames[static_cast<int>(mode)]; }

std::size_t window_budget(DocMode mode) {
  switch (mode) {
    case DocMode::window_50t: return 50;
    case DocMode::window_100t: return 100;
    case DocMode::window_250t: return 250;
    case DocMode::window_500t: return 500;
    default: return 0;
  }
}

std::size_t whitespace_token_count(std::string_view text) { return text::split_ws(text).size(); }

SentenceLengths measure(const ParallelCorpus& corpus, const TokenCounter& counter) {
  SentenceLengths lengths;
  lengths.source.reserve(corpus.size());
  lengths.target.reserve(corpus.size());
  for (const auto& pair : corpus.pairs) {
    lengths.source.push_back(counter(pair.source));
    lengths.target.push_back(counter(pair.target));
  }
  return lengths;
}

DocDataset build_doc_dataset(const ParallelCorpus& corpus, DocMode mode,
                             const SentenceLengths& lengths) {
  validate(corpus);
  if (lengths.source.size() != corpus.size() || lengths.target.size() != corpus.size())
    throw DataError("token counts cover " + std::to_string(lengths.source.size()) + "/" +
                    std::to_string(lengths.target.size()) + " of " +
                    std::to_string(corpus.size()) + " sentences");
  DocDataset out;
  auto emit = [&](std::size_t begin, std::size_t end) {
    DocSample s;
    s.source = join_side(corpus, begin, end, true);
    s.target = join_side(corpus, begin, end, false);
    s.first = begin;
    s.sentence_count = end - begin;
    for (std::size_t i = begin; i < end; ++i) {
      s.source_tokens += lengths.source[i];
      s.target_tokens += lengths.target[i];
    }
    out.samples.push_back(std::move(s));
    return &out.samples.back();
  };

  const std::size_t budget = window_budget(mode);
  for (const auto& doc : corpus.effective_documents()) {
    if (mode == DocMode::curr) {
      for (std::size_t i = doc.begin; i < doc.end; ++i) emit(i, i + 1);
    } else if (mode == DocMode::prev_curr) {
      for (std::size_t i = doc.begin; i < doc.end; ++i) emit(i == doc.begin ? i : i - 1, i + 1);
    } else {
      std::size_t start = doc.begin;
      std::size_t used = 0;
      for (std::size_t i = doc.begin; i < doc.end; ++i) {
        if (i > start && used + lengths.source[i] > budget) {
          emit(start, i);
          start = i;
          used = 0;
        }
        used += lengths.source[i];
      }
      if (start < doc.end) emit(start, doc.end);
    }
  }
  if (budget > 0) {
    for (auto& s : out.samples) {
      if (s.source_tokens > budget) {
        s.over_budget = true;
        ++out.over_budget;
      }
      if (s.target_tokens > budget) ++out.target_overflow;
    }
  }
  return out;
}

DocDataset build_doc_dataset(const ParallelCorpus& corpus, DocMode mode,
                             const TokenCounter& counter) {
  return build_doc_dataset(corpus, mode, measure(corpus, counter));
}

ParallelCorpus synthetic_shuffle(const ParallelCorpus& corpus, std::uint64_t seed) {
  ParallelCorpus out;
  out.pairs = corpus.pairs;
  std::mt19937_64 rng(seed);
  std::shuffle(out.pairs.begin(), out.pairs.end(), rng);
  return out;
}

std::vector<DocSample> merge_datasets(std::span<const DocDataset> datasets, std::uint64_t seed) {
  std::vector<DocSample> all;
  for (const auto& d : datasets) all.insert(all.end(), d.samples.begin(), d.samples.end());
  std::mt19937_64 rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  return all;
}

std::string join_sentences(std::span<const std::string> sentences) {
  std::string out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i) out += kSepJoin;
    out += sentences[i];
  }
  return out;
}

SeparatorCountError::SeparatorCountError(std::size_t expected, std::size_t actual)
    : DataError("expected " + std::to_string(expected) + " sentences separated by " +
                std::string(kSepTag) + ", found " + std::to_string(actual)),
      expected_(expected),
      actual_(actual) {}

std::vector<std::string> split_doc_hypothesis(std::string_view text, std::size_t expected) {
  if (expected == 0) throw DataError("expected sentence count must be at least 1");
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const auto hit = text.find(kSepTag, pos);
    const auto piece = text.substr(pos, hit == std::string_view::npos ? std::string_view::npos : hit - pos);
    parts.emplace_back(text::trim(piece));
    if (hit == std::string_view::npos) break;
    pos = hit + kSepTag.size();
  }
  if (parts.size() != expected) throw SeparatorCountError(expected, parts.size());
  return parts;
}

SentenceNbest split_doc_nbest(std::span<const NBestList> doc_lists,
                              std::span<const DocumentRange> chunks) {
  std::size_t sentences = 0;
  for (const auto& c : chunks) {
    if (c.end <= c.begin) throw DataError("empty document chunk");
    sentences = std::max(sentences, c.end);
  }
  SentenceNbest out;
  out.lists.resize(sentences);
  for (std::size_t i = 0; i < sentences; ++i) out.lists[i].segment_id = static_cast<SegmentId>(i);
  for (const auto& list : doc_lists) {
    if (list.segment_id < 0 || static_cast<std::size_t>(list.segment_id) >= chunks.size())
      throw DataError("document n-best segment " + std::to_string(list.segment_id) +
                      " has no chunk");
    const auto& chunk = chunks[static_cast<std::size_t>(list.segment_id)];
    for (const auto& hyp : list.hypotheses) {
      ++out.report.hypotheses;
      std::vector<std::string> parts;
      try {
        parts = split_doc_hypothesis(hyp.text, chunk.end - chunk.begin);
      } catch (const SeparatorCountError&) {
        ++out.report.discarded;
        continue;
      }
      ++out.report.kept;
      for (std::size_t k = 0; k < parts.size(); ++k) {
        Hypothesis h = hyp;
        h.segment_id = static_cast<SegmentId>(chunk.begin + k);
        h.text = std::move(parts[k]);
        h.origin = Origin::document;
        out.lists[chunk.begin + k].hypotheses.push_back(std::move(h));
      }
    }
  }
  return out;
}

}  // namespace qad::datapipe
