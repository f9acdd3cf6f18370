#include "qad/tm/index.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>

#include "qad/core/error.hpp"
#include "qad/core/nbest.hpp"
#include "qad/text/unicode.hpp"
#include "qad/text/utf8.hpp"
#include "qad/util/parallel.hpp"

namespace qad::tm {

namespace {

constexpr char kMagic[] = "TMIX1";

void put_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(bytes, 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw DataError("truncated TM index");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

void put_string(std::ostream& out, std::string_view s) {
  put_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
  const auto n = get_u64(in);
  if (n > (std::uint64_t{1} << 32)) throw DataError("corrupt TM index string length");
  std::string s(n, '\0');
  if (n && !in.read(s.data(), static_cast<std::streamsize>(n))) throw DataError("truncated TM index");
  return s;
}

}  // namespace

std::vector<std::string> tm_tokens(std::string_view sentence) {
  return text::split_ws(text::to_lower(sentence));
}

double similarity(std::span<const std::string> a, std::span<const std::string> b) {
  const std::size_t longer = std::max(a.size(), b.size());
  if (longer == 0) return 1.0;
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return 1.0 - static_cast<double>(prev[b.size()]) / static_cast<double>(longer);
}

double similarity(std::string_view a, std::string_view b) {
  return similarity(tm_tokens(a), tm_tokens(b));
}

TmIndex TmIndex::build(const ParallelCorpus& corpus) {
  TmIndex index;
  index.pairs_ = corpus.pairs;
  index.tokens_.reserve(corpus.size());
  for (std::size_t id = 0; id < corpus.size(); ++id) {
    index.tokens_.push_back(tm_tokens(corpus.pairs[id].source));
    std::map<std::string_view, std::uint32_t> tf;
    for (const auto& t : index.tokens_.back()) ++tf[t];
    for (const auto& [token, count] : tf) {
      auto it = index.postings_.find(token);
      if (it == index.postings_.end()) it = index.postings_.emplace(std::string(token), std::vector<Posting>{}).first;
      it->second.push_back({id, count});
    }
  }
  return index;
}

std::span<const Posting> TmIndex::postings(std::string_view token) const {
  const auto it = postings_.find(token);
  if (it == postings_.end()) return {};
  return it->second;
}

std::vector<Match> TmIndex::query(std::string_view sentence, std::size_t k, double threshold) const {
  if (k == 0) throw DataError("k must be at least 1");
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw DataError("threshold must lie in [0, 1]");
  const auto query_tokens = tm_tokens(sentence);
  if (query_tokens.empty()) return {};

  std::map<std::string_view, std::uint32_t> query_tf;
  for (const auto& t : query_tokens) ++query_tf[t];
  std::map<std::size_t, std::size_t> overlap;
  for (const auto& [token, qtf] : query_tf)
    for (const auto& p : postings(token)) overlap[p.pair_id] += std::min(qtf, p.tf);

  // Highest overlap first, ties by pair id.
  std::vector<std::pair<std::size_t, std::size_t>> ranked(overlap.begin(), overlap.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  // Similarity is at most overlap / query length, which bounds every
  // candidate outside the scored pool.
  const double qlen = static_cast<double>(query_tokens.size());
  std::vector<Match> scored;
  std::size_t pool = std::min(ranked.size(), 4 * k);
  std::size_t done = 0;
  while (true) {
    for (; done < pool; ++done) {
      const std::size_t id = ranked[done].first;
      const double s = similarity(query_tokens, tokens_[id]);
      if (s >= threshold) scored.push_back({id, pairs_[id].source, pairs_[id].target, s});
    }
    std::sort(scored.begin(), scored.end(), [](const Match& a, const Match& b) {
      return a.similarity != b.similarity ? a.similarity > b.similarity : a.pair_id < b.pair_id;
    });
    if (scored.size() > k) scored.resize(k);
    if (done == ranked.size()) break;
    const double bound = static_cast<double>(ranked[done].second) / qlen;
    const double needed = scored.size() < k ? threshold : scored.back().similarity;
    if (bound < needed - 1e-12) break;
    pool = std::min(ranked.size(), 2 * pool);
  }
  return scored;
}

void TmIndex::save(std::ostream& out) const {
  out.write(kMagic, 5);
  put_u64(out, pairs_.size());
  for (const auto& p : pairs_) {
    put_string(out, p.source);
    put_string(out, p.target);
  }
  put_u64(out, postings_.size());
  for (const auto& [token, list] : postings_) {
    put_string(out, token);
    put_u64(out, list.size());
    for (const auto& p : list) {
      put_u64(out, p.pair_id);
      put_u64(out, p.tf);
    }
  }
}

TmIndex TmIndex::load(std::istream& in) {
  char magic[5];
  if (!in.read(magic, 5) || std::string_view(magic, 5) != kMagic)
    throw DataError("not a TM index (missing TMIX1 header)");
  TmIndex index;
  const auto n = get_u64(in);
  for (std::uint64_t i = 0; i < n; ++i) {
    SentencePair p;
    p.source = get_string(in);
    p.target = get_string(in);
    index.tokens_.push_back(tm_tokens(p.source));
    index.pairs_.push_back(std::move(p));
  }
  const auto vocab = get_u64(in);
  for (std::uint64_t v = 0; v < vocab; ++v) {
    auto token = get_string(in);
    const auto count = get_u64(in);
    std::vector<Posting> list;
    for (std::uint64_t c = 0; c < count; ++c) {
      const auto id = get_u64(in);
      const auto tf = get_u64(in);
      if (id >= n) throw DataError("TM index posting refers to missing pair " + std::to_string(id));
      list.push_back({static_cast<std::size_t>(id), static_cast<std::uint32_t>(tf)});
    }
    index.postings_.emplace(std::move(token), std::move(list));
  }
  return index;
}

AdaptationResult extract_adaptation_sets(const TmIndex& index,
                                         std::span<const std::string> inputs, std::size_t k,
                                         double threshold, std::size_t threads) {
  AdaptationResult result;
  result.sets.resize(inputs.size());
  parallel_for(inputs.size(), threads, [&](std::size_t i) {
    result.sets[i] = {i, index.query(inputs[i], k, threshold)};
  });
  std::set<std::size_t> distinct;
  result.stats.inputs = inputs.size();
  for (const auto& set : result.sets) {
    if (!set.matches.empty()) ++result.stats.matched_inputs;
    result.stats.total_matches += set.matches.size();
    for (const auto& m : set.matches) distinct.insert(m.pair_id);
  }
  result.stats.distinct_pairs = distinct.size();
  return result;
}

void write_adaptation_sets(std::ostream& out, std::span<const AdaptationSet> sets) {
  for (const auto& set : sets)
    for (const auto& m : set.matches)
      out << set.input_id << '\t' << format_number(m.similarity) << '\t' << m.source << '\t'
          << m.target << '\n';
}

void write_stats(std::ostream& out, const AdaptationStats& s) {
  out << "inputs=" << s.inputs << '\n'
      << "matched_inputs=" << s.matched_inputs << '\n'
      << "total_matches=" << s.total_matches << '\n'
      << "distinct_pairs=" << s.distinct_pairs << '\n';
}

}  // namespace qad::tm
