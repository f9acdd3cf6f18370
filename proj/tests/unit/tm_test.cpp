#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "naive.hpp"
#include "qad/core/error.hpp"
#include "qad/tm/index.hpp"
#include "synthetic.hpp"

using namespace qad;
using namespace qad::tm;

namespace {

ParallelCorpus corpus_of(const std::vector<std::string>& sources) {
  ParallelCorpus c;
  for (std::size_t i = 0; i < sources.size(); ++i) c.pairs.push_back({sources[i], "t" + std::to_string(i)});
  return c;
}

}  // namespace

TEST(Similarity, Properties) {
  EXPECT_DOUBLE_EQ(similarity("a b c", "a b c"), 1.0);
  EXPECT_DOUBLE_EQ(similarity("A b C", "a B c"), 1.0);
  EXPECT_DOUBLE_EQ(similarity("a b c d", "a x c d"), 0.75);
  EXPECT_DOUBLE_EQ(similarity("a b", "c d e"), 0.0);
  EXPECT_DOUBLE_EQ(similarity("", ""), 1.0);
  std::mt19937_64 rng(3);
  const auto vocab = oracle::vocabulary(5);
  for (int i = 0; i < 300; ++i) {
    const auto a = oracle::random_sentence(rng, vocab, 0, 8);
    const auto b = oracle::random_sentence(rng, vocab, 0, 8);
    const double s = similarity(a, b);
    EXPECT_EQ(s, similarity(b, a));
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_EQ(s == 1.0, tm_tokens(a) == tm_tokens(b));
  }
}

TEST(Index, SinglePairAndDuplicates) {
  const auto idx = TmIndex::build(corpus_of({"Dobrý den světe"}));
  for (const auto& t : {"dobrý", "den", "světe"}) {
    ASSERT_EQ(idx.postings(t).size(), 1u);
    EXPECT_EQ(idx.postings(t)[0].pair_id, 0u);
  }
  const auto dup = TmIndex::build(corpus_of({"a b", "a b"}));
  EXPECT_EQ(dup.size(), 2u);
  EXPECT_EQ(dup.postings("a").size(), 2u);
}

TEST(Index, EveryPairReachableByEachToken) {
  std::mt19937_64 rng(1);
  const auto vocab = oracle::vocabulary(2000);
  std::vector<std::string> sources;
  for (int i = 0; i < 10000; ++i) sources.push_back(oracle::random_sentence(rng, vocab, 1, 12));
  const auto idx = TmIndex::build(corpus_of(sources));
  for (std::size_t id = 0; id < sources.size(); ++id)
    for (const auto& t : tm_tokens(sources[id])) {
      const auto p = idx.postings(t);
      ASSERT_TRUE(std::binary_search(p.begin(), p.end(), Posting{id, 0},
                                     [](const Posting& a, const Posting& b) { return a.pair_id < b.pair_id; }));
    }
}

TEST(Query, IdentityAndThresholdOne) {
  const auto c = corpus_of({"the cat sat", "a dog ran", "the cat ran"});
  const auto idx = TmIndex::build(c);
  const auto m = idx.query("The cat sat", 3, 0.0);
  ASSERT_FALSE(m.empty());
  EXPECT_EQ(m[0].pair_id, 0u);
  EXPECT_EQ(m[0].similarity, 1.0);
  EXPECT_TRUE(idx.query("the cat jumped", 5, 1.0).empty());
  EXPECT_TRUE(idx.query("zebra", 5, 0.0).empty());
  EXPECT_THROW(idx.query("a", 0, 0.5), DataError);
  EXPECT_THROW(idx.query("a", 1, 1.5), DataError);
}

TEST(Query, MatchesBruteForceOn100Pairs) {
  std::mt19937_64 rng(7);
  const auto vocab = oracle::vocabulary(25);
  std::vector<std::string> sources;
  for (int i = 0; i < 100; ++i) sources.push_back(oracle::random_sentence(rng, vocab, 1, 10));
  const auto c = corpus_of(sources);
  const auto idx = TmIndex::build(c);
  for (int q = 0; q < 100; ++q) {
    const auto query = oracle::random_sentence(rng, vocab, 1, 10);
    for (std::size_t k : {1u, 3u, 10u})
      for (double th : {0.0, 0.19, 0.25, 0.4, 0.8})
        ASSERT_EQ(idx.query(query, k, th), oracle::naive_tm_query(c, query, k, th)) << query;
  }
}

TEST(Query, PoolGrowsPastHighOverlapDecoys) {
  // Ten scrambled decoys outrank the true match on overlap, filling the 4k pool.
  std::vector<std::string> sources(10, "f e d c b a");
  sources.push_back("a b c d e x");
  const auto c = corpus_of(sources);
  const auto idx = TmIndex::build(c);
  const auto m = idx.query("a b c d e f", 1, 0.0);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].pair_id, 10u);
  EXPECT_EQ(m, oracle::naive_tm_query(c, "a b c d e f", 1, 0.0));
}

TEST(Query, PlantedCountsAtStandardThresholds) {
  // Each query has 6..14 words and variants with e = 0..4 substitutions, so
  // similarity 1 - e/n. Filler shares no vocabulary.
  const auto planted = oracle::planted_tm_corpus(11, 1000, 40, true);
  const auto idx = TmIndex::build(planted.corpus);
  std::size_t previous = SIZE_MAX;
  for (double th : {0.19, 0.25, 0.4}) {
    std::size_t expected = 0;
    for (const auto& q : planted.queries) {
      const double n = static_cast<double>(tm_tokens(q).size());
      for (int e = 0; e <= 4; ++e)
        if (1.0 - e / n >= th) ++expected;
    }
    const auto result = extract_adaptation_sets(idx, planted.queries, 10, th);
    EXPECT_EQ(result.stats.total_matches, expected) << th;
    EXPECT_EQ(result.stats.matched_inputs, planted.queries.size());
    EXPECT_LE(result.stats.total_matches, previous);
    previous = result.stats.total_matches;
  }
}

TEST(Query, ThreadCountDoesNotMatter) {
  const auto planted = oracle::planted_tm_corpus(5, 500, 30);
  const auto idx = TmIndex::build(planted.corpus);
  const auto a = extract_adaptation_sets(idx, planted.queries, 4, 0.25, 1);
  const auto b = extract_adaptation_sets(idx, planted.queries, 4, 0.25, 8);
  std::ostringstream sa, sb;
  write_adaptation_sets(sa, a.sets);
  write_adaptation_sets(sb, b.sets);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_FALSE(sa.str().empty());
}

TEST(Adaptation, DisjointInputsGiveEmptySets) {
  const auto idx = TmIndex::build(corpus_of({"a b c", "d e f"}));
  const std::vector<std::string> inputs{"x y", "z"};
  const auto r = extract_adaptation_sets(idx, inputs, 5, 0.0);
  ASSERT_EQ(r.sets.size(), 2u);
  for (const auto& s : r.sets) EXPECT_TRUE(s.matches.empty());
  EXPECT_EQ(r.stats.matched_inputs, 0u);
  EXPECT_EQ(r.stats.total_matches, 0u);
  EXPECT_EQ(r.stats.distinct_pairs, 0u);
}

TEST(Serialization, RoundTripAndDeterminism) {
  const auto planted = oracle::planted_tm_corpus(2, 200, 10);
  const auto idx = TmIndex::build(planted.corpus);
  std::ostringstream a, b;
  idx.save(a);
  TmIndex::build(planted.corpus).save(b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, 5), "TMIX1");
  std::istringstream in(a.str());
  EXPECT_EQ(TmIndex::load(in), idx);
  std::istringstream bad("TMIX0....");
  EXPECT_THROW(TmIndex::load(bad), DataError);
  std::istringstream truncated(a.str().substr(0, a.str().size() / 2));
  EXPECT_THROW(TmIndex::load(truncated), DataError);
}
