#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "qad/core/error.hpp"
#include "qad/datapipe/docdata.hpp"
#include "qad/datapipe/filter.hpp"
#include "qad/text/utf8.hpp"
#include "golden.hpp"
#include "synthetic.hpp"

using namespace qad;
using namespace qad::datapipe;

using oracle::kDocumentExample;

namespace {

std::size_t count_tags(const std::string& s) {
  std::size_t n = 0;
  for (auto pos = s.find(kSepTag); pos != std::string::npos; pos = s.find(kSepTag, pos + 1)) ++n;
  return n;
}

ParallelCorpus corpus_of(const std::vector<std::pair<std::string, std::string>>& pairs) {
  ParallelCorpus c;
  for (const auto& [s, t] : pairs) c.pairs.push_back({s, t});
  return c;
}

std::string words(std::size_t n, const std::string& w = "x") {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out += (i ? " " : "") + w;
  return out;
}

}  // namespace

TEST(Normalize, Examples) {
  EXPECT_EQ(normalize_punct("Dobrý den, světe."), "Dobrý den, světe.");
  EXPECT_EQ(normalize_punct("a\u200Bb"), "ab");
  EXPECT_EQ(normalize_punct("„Ahoj“ «привіт»"), "\"Ahoj\" \"привіт\"");
  EXPECT_EQ(normalize_punct("it’s – ok…"), "it's - ok...");
  EXPECT_EQ(normalize_punct("  a\u00A0\t b \n"), "a b");
  EXPECT_EQ(normalize_punct("\uFEFFsoft\u00ADhyphen\x07"), "softhyphen");
  EXPECT_EQ(normalize_punct(""), "");
}

TEST(Normalize, IdempotentOnFuzz) {
  const std::vector<std::string> atoms{"a", "ž", "ї", " ", "  ", "\t", "\u200B", "„",
                                       "“", "’", "—", "…", "\u00A0",
                                       "\u00AD", "\u202E", "\x01", ".", "\"", "🙂", "\u2060"};
  std::mt19937_64 rng(1);
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    for (std::size_t k = 0, n = rng() % 20; k < n; ++k) s += atoms[rng() % atoms.size()];
    const auto once = normalize_punct(s);
    ASSERT_EQ(normalize_punct(once), once);
  }
}

TEST(Filter, UnchangedWhenAllValid) {
  const auto c = corpus_of({{"a b", "c d"}, {"e", "f"}});
  const auto r = filter_corpus(c, {});
  EXPECT_EQ(r.corpus.pairs, c.pairs);
  EXPECT_EQ(r.report.kept, 2u);
}

TEST(Filter, OneDuplicateRemoved) {
  const auto c = corpus_of({{"a b", "c d"}, {"e", "f"}, {"a b", "c d"}});
  const auto r = filter_corpus(c, {});
  EXPECT_EQ(r.corpus.size(), 2u);
  EXPECT_EQ(r.report.duplicate, 1u);
}

TEST(Filter, PerRuleCountsTable) {
  FilterConfig cfg;
  cfg.min_len = 2;
  cfg.max_len = 6;
  cfg.max_ratio = 2.0;
  const auto c = corpus_of({
      {"a", "b c"},                        // too short (source)
      {"a b", ""},                         // too short (target)
      {words(7), words(6)},                // too long
      {words(3), words(7)},                // too long wins over ratio
      {"a b", "c d e f g"},                // ratio 2.5
      {"a b c", "d e f g h i"},            // ratio 2.0 kept
      {"a „b“", "c d"},          // kept, normalized
      {"a \"b\"", "c  d"},                 // duplicate after normalization
      {"a b", "c d"},                      // kept
  });
  const auto r = filter_corpus(c, cfg);
  EXPECT_EQ(r.report.input, 9u);
  EXPECT_EQ(r.report.too_short, 2u);
  EXPECT_EQ(r.report.too_long, 2u);
  EXPECT_EQ(r.report.ratio, 1u);
  EXPECT_EQ(r.report.duplicate, 1u);
  EXPECT_EQ(r.report.kept, 3u);
  ASSERT_EQ(r.corpus.size(), 3u);
  EXPECT_EQ(r.corpus.pairs[1].source, "a \"b\"");
  std::ostringstream rep;
  write_report(rep, r.report);
  EXPECT_EQ(rep.str(), "input=9\nkept=3\ntoo_short=2\ntoo_long=2\nratio=1\nduplicate=1\n");
  // Applying twice equals applying once.
  const auto again = filter_corpus(r.corpus, cfg);
  EXPECT_EQ(again.corpus.pairs, r.corpus.pairs);
}

TEST(Filter, DocumentsRemapped) {
  auto c = corpus_of({{"a", "b"}, {"", "x"}, {"c", "d"}, {"", ""}, {"e", "f"}});
  c.documents = {{0, 2}, {2, 4}, {4, 5}};
  auto r = filter_corpus(c, {});
  EXPECT_EQ(r.corpus.documents, (std::vector<DocumentRange>{{0, 1}, {1, 2}, {2, 3}}));
  c.documents = {{0, 1}, {1, 2}, {2, 5}};
  r = filter_corpus(c, {});
  EXPECT_EQ(r.corpus.documents, (std::vector<DocumentRange>{{0, 1}, {1, 3}}));
}

TEST(Filter, InvalidConfigThrows) {
  FilterConfig cfg;
  cfg.min_len = 0;
  EXPECT_THROW(filter_corpus({}, cfg), DataError);
  cfg.min_len = 3;
  cfg.max_len = 2;
  EXPECT_THROW(filter_corpus({}, cfg), DataError);
  cfg = {};
  cfg.max_ratio = 0.5;
  EXPECT_THROW(filter_corpus({}, cfg), DataError);
}

TEST(DocExample, JoinGivesFourTagsAndSplitRecovers) {
  const auto joined = join_sentences(kDocumentExample);
  EXPECT_EQ(count_tags(joined), 4u);
  EXPECT_NE(joined.find("látky. <SEP> Ale myslím"), std::string::npos);
  EXPECT_EQ(split_doc_hypothesis(joined, 5), kDocumentExample);
}

TEST(Split, CountMismatchCarriesActual) {
  EXPECT_EQ(split_doc_hypothesis("jedna věta", 1), std::vector<std::string>{"jedna věta"});
  try {
    split_doc_hypothesis("a <SEP> b <SEP> c", 2);
    FAIL();
  } catch (const SeparatorCountError& e) {
    EXPECT_EQ(e.actual(), 3u);
    EXPECT_EQ(e.expected(), 2u);
  }
  EXPECT_EQ(split_doc_hypothesis("a<SEP>b", 2), (std::vector<std::string>{"a", "b"}));
  EXPECT_THROW(split_doc_hypothesis("a", 0), DataError);
}

TEST(Split, JoinSplitRoundTripFuzz) {
  std::mt19937_64 rng(5);
  const auto vocab = oracle::vocabulary(40);
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::string> group;
    for (std::size_t k = 0, n = 1 + rng() % 8; k < n; ++k)
      group.push_back(oracle::random_sentence(rng, vocab, 1, 12));
    ASSERT_EQ(split_doc_hypothesis(join_sentences(group), group.size()), group);
  }
}

TEST(DocBuild, CurrIsIdentity) {
  auto c = corpus_of({{"a", "b"}, {"c", "d"}, {"e", "f"}});
  c.documents = {{0, 2}, {2, 3}};
  const auto d = build_doc_dataset(c, DocMode::curr);
  ASSERT_EQ(d.samples.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(d.samples[i].source, c.pairs[i].source);
    EXPECT_EQ(d.samples[i].target, c.pairs[i].target);
    EXPECT_EQ(d.samples[i].sentence_count, 1u);
  }
}

TEST(DocBuild, PrevCurrRespectsDocuments) {
  auto c = corpus_of({{"a", "A"}, {"b", "B"}, {"c", "C"}, {"d", "D"}});
  c.documents = {{0, 3}, {3, 4}};
  const auto d = build_doc_dataset(c, DocMode::prev_curr);
  ASSERT_EQ(d.samples.size(), 4u);
  EXPECT_EQ(d.samples[0].source, "a");
  EXPECT_EQ(d.samples[1].source, "a <SEP> b");
  EXPECT_EQ(d.samples[2].target, "B <SEP> C");
  EXPECT_EQ(d.samples[3].source, "d");
  EXPECT_EQ(d.samples[2].sentence_count, 2u);
}

TEST(DocBuild, Window50HandSchedule) {
  // Source lengths per document: [20, 20, 15, 30, 60, 5] and [50, 1].
  const std::vector<std::size_t> lens{20, 20, 15, 30, 60, 5, 50, 1};
  ParallelCorpus c;
  for (auto n : lens) c.pairs.push_back({words(n), words(n, "y")});
  c.documents = {{0, 6}, {6, 8}};
  const auto d = build_doc_dataset(c, DocMode::window_50t);
  const std::vector<DocumentRange> expected{{0, 2}, {2, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}};
  ASSERT_EQ(d.samples.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(d.samples[i].range(), expected[i]);
  EXPECT_TRUE(d.samples[2].over_budget);
  EXPECT_EQ(d.over_budget, 1u);
  EXPECT_EQ(d.target_overflow, 1u);
  for (const auto& s : d.samples) {
    if (!s.over_budget) EXPECT_LE(s.source_tokens, 50u);
    EXPECT_EQ(count_tags(s.source), s.sentence_count - 1);
    EXPECT_EQ(count_tags(s.target), s.sentence_count - 1);
  }
}

TEST(DocBuild, WindowsAreLosslessAndWithinBudget) {
  std::mt19937_64 rng(12);
  const auto vocab = oracle::vocabulary(50);
  ParallelCorpus c;
  std::size_t begin = 0;
  for (int doc = 0; doc < 30; ++doc) {
    const std::size_t n = 1 + rng() % 25;
    for (std::size_t i = 0; i < n; ++i)
      c.pairs.push_back({oracle::random_sentence(rng, vocab, 1, 40),
                         oracle::random_sentence(rng, vocab, 1, 40)});
    c.documents.push_back({begin, begin + n});
    begin += n;
  }
  for (auto mode : {DocMode::window_50t, DocMode::window_100t, DocMode::window_250t,
                    DocMode::window_500t}) {
    const auto d = build_doc_dataset(c, mode);
    std::vector<std::string> src, tgt;
    for (const auto& s : d.samples) {
      EXPECT_LE(s.source_tokens, window_budget(mode));
      const auto a = split_doc_hypothesis(s.source, s.sentence_count);
      const auto b = split_doc_hypothesis(s.target, s.sentence_count);
      src.insert(src.end(), a.begin(), a.end());
      tgt.insert(tgt.end(), b.begin(), b.end());
      // Never crosses a document boundary.
      bool inside = false;
      for (const auto& doc : c.documents)
        inside |= doc.begin <= s.first && s.first + s.sentence_count <= doc.end;
      EXPECT_TRUE(inside);
    }
    ASSERT_EQ(src.size(), c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      EXPECT_EQ(src[i], c.pairs[i].source);
      EXPECT_EQ(tgt[i], c.pairs[i].target);
    }
  }
}

TEST(DocBuild, PluggableCounterAndLengthChecks) {
  auto c = corpus_of({{"abcd", "x"}, {"ab", "y"}, {"abc", "z"}});
  const TokenCounter chars = [](std::string_view s) { return text::length(s); };
  const auto d = build_doc_dataset(c, DocMode::window_50t, chars);
  EXPECT_EQ(d.samples.size(), 1u);
  EXPECT_EQ(d.samples[0].source_tokens, 9u);
  SentenceLengths bad{{1, 2}, {1, 2}};
  EXPECT_THROW(build_doc_dataset(c, DocMode::curr, bad), DataError);
}

TEST(DocBuild, ModesAndMerging) {
  for (auto m : kAllDocModes) EXPECT_EQ(parse_doc_mode(doc_mode_name(m)), m);
  EXPECT_THROW(parse_doc_mode("window_10t"), DataError);
  auto c = corpus_of({{"a", "A"}, {"b", "B"}, {"c", "C"}});
  std::vector<DocDataset> sets{build_doc_dataset(c, DocMode::curr),
                               build_doc_dataset(c, DocMode::prev_curr)};
  const auto m1 = merge_datasets(sets, 7);
  const auto m2 = merge_datasets(sets, 7);
  ASSERT_EQ(m1.size(), 6u);
  for (std::size_t i = 0; i < m1.size(); ++i) EXPECT_EQ(m1[i].source, m2[i].source);
  const auto shuffled = synthetic_shuffle(c, 3);
  EXPECT_TRUE(shuffled.documents.empty());
  EXPECT_TRUE(std::is_permutation(shuffled.pairs.begin(), shuffled.pairs.end(), c.pairs.begin()));
}

TEST(DocNbest, SplitsAndDiscards) {
  const std::vector<DocumentRange> chunks{{0, 2}, {2, 3}};
  NBestList l0{0, {{0, "a <SEP> b", {}, -1.0, Origin::other}, {0, "ab", {}, -2.0, Origin::other}}};
  l0.hypotheses[0].features.set("model_ll", -1.0);
  NBestList l1{1, {{1, "c", {}, -0.5, Origin::other}}};
  const std::vector<NBestList> lists{l0, l1};
  const auto r = split_doc_nbest(lists, chunks);
  EXPECT_EQ(r.report.hypotheses, 3u);
  EXPECT_EQ(r.report.kept, 2u);
  EXPECT_EQ(r.report.discarded, 1u);
  ASSERT_EQ(r.lists.size(), 3u);
  EXPECT_EQ(r.lists[1].segment_id, 1);
  ASSERT_EQ(r.lists[1].size(), 1u);
  EXPECT_EQ(r.lists[1].hypotheses[0].text, "b");
  EXPECT_EQ(r.lists[1].hypotheses[0].origin, Origin::document);
  EXPECT_EQ(r.lists[1].hypotheses[0].features.at("model_ll"), -1.0);
  EXPECT_EQ(r.lists[2].hypotheses[0].text, "c");
}
