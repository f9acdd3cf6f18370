// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli_fixture.hpp"
#include "golden.hpp"
#include "naive.hpp"
#include "postprocess_fixtures.hpp"
#include "qad/core/io.hpp"
#include "qad/core/nbest.hpp"
#include "qad/datapipe/docdata.hpp"
#include "qad/factors/factors.hpp"
#include "qad/mbr/decode.hpp"
#include "qad/metrics/bootstrap.hpp"
#include "qad/metrics/metric.hpp"
#include "qad/postprocess/rules.hpp"
#include "qad/rerank/envelope.hpp"
#include "qad/rerank/mert.hpp"
#include "qad/rerank/rescore.hpp"
#include "qad/tm/index.hpp"
#include "synthetic.hpp"

using namespace qad;

namespace {

// Collects failed checks of one criterion.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++count_;
  }
  bool ok() const { return count_ == 0; }
  std::string summary() const {
    std::string s;
    for (const auto& f : failures_) s += (s.empty() ? "" : "; ") + f;
    if (count_ > failures_.size()) s += "; ... " + std::to_string(count_) + " failures in total";
    return s;
  }

 private:
  std::vector<std::string> failures_;
  std::size_t count_ = 0;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string data(const std::string& name) { return std::string(QAD_TEST_DATA) + "/" + name; }

NBestList list_of(const std::vector<std::string>& texts) {
  NBestList list{0, {}};
  for (const auto& t : texts) list.hypotheses.push_back({0, t, {}, 0.0, Origin::ensemble});
  return list;
}

// Pairwise order of expected utilities: -1, 0 (tied within tolerance) or 1.
std::vector<int> pairwise_order(const Eigen::VectorXd& v, double tolerance) {
  std::vector<int> order;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    for (Eigen::Index j = i + 1; j < v.size(); ++j) {
      const double d = v[i] - v[j];
      order.push_back(d > tolerance ? 1 : d < -tolerance ? -1 : 0);
    }
  return order;
}

std::size_t count_occurrences(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

// 1. Corpus metrics agree with sacreBLEU 2.0.0 on the desk corpora.
void metric_parity(Checker& c) {
  struct Expect {
    std::string name;
    double bleu, chrf;
  };
  const std::vector<Expect> expected{{"desk1", 59.43890983161863, 76.19623254962889},
                                     {"desk2", 56.92099171866162, 76.36758037430907},
                                     {"desk3", 66.11338053122293, 79.6569804963049}};
  const auto start = Clock::now();
  for (const auto& e : expected) {
    const auto hyps = io::read_lines(data(e.name + ".hyp"));
    const auto refs = io::read_lines(data(e.name + ".ref"));
    c.expect(hyps.size() >= 20, e.name + " has fewer than 20 segments");
    const auto bleu = metrics::corpus_metric(metrics::MetricKind::bleu, hyps, refs);
    const auto chrf = metrics::corpus_metric(metrics::MetricKind::chrf, hyps, refs);
    c.expect(std::abs(bleu.score.value - e.bleu) <= 0.01, e.name + " BLEU " + format_number(bleu.score.value));
    c.expect(std::abs(chrf.score.value - e.chrf) <= 0.01, e.name + " chrF " + format_number(chrf.score.value));
    c.expect(bleu.score.signature.find("tok:13a|smooth:exp") != std::string::npos, "BLEU signature");
    c.expect(chrf.score.signature.find("eff:yes|nc:6|nw:0") != std::string::npos, "chrF signature");
  }
  const double t = seconds_since(start);
  c.expect(t < 1.0, "took " + format_number(t) + " s");
}

// 2. MBR decoding equals a naive double loop, including tie-breaks.
void mbr_oracle(Checker& c) {
  std::mt19937_64 rng(2);
  const auto start = Clock::now();
  for (int inst = 0; inst < 100; ++inst) {
    const auto cands = oracle::random_texts(rng, 1 + rng() % 64);
    const auto samples = oracle::random_texts(rng, 1 + rng() % 64);
    const auto r = mbr::mbr_decode(list_of(cands), {0, samples}, mbr::UtilityFunction::chrf(), 4);
    const auto naive = oracle::naive_mbr(cands, samples, oracle::naive_chrf_utility);
    c.expect(r.best_index == naive.best, "instance " + std::to_string(inst) + " selection");
    bool same = static_cast<std::size_t>(r.expected_utilities.size()) == cands.size();
    for (std::size_t i = 0; same && i < cands.size(); ++i)
      same = r.expected_utilities[static_cast<Eigen::Index>(i)] == naive.expected[i];
    c.expect(same, "instance " + std::to_string(inst) + " expected utilities");
  }
  const double t = seconds_since(start);
  c.expect(t < 10.0, "took " + format_number(t) + " s");
}

// 3. Selection and ranking are invariant under u -> 3u + 7.
void mbr_affine(Checker& c) {
  std::mt19937_64 rng(3);
  for (int inst = 0; inst < 50; ++inst) {
    const auto cands = oracle::random_texts(rng, 2 + rng() % 40, 10);
    const auto samples = oracle::random_texts(rng, 2 + rng() % 40, 10);
    const auto list = list_of(cands);
    const Eigen::MatrixXd m = mbr::utility_matrix(cands, samples, mbr::UtilityFunction::chrf());
    const Eigen::MatrixXd m2 = (3.0 * m.array() + 7.0).matrix();
    const auto base = mbr::mbr_decode(list, {0, samples}, mbr::UtilityFunction::from_matrix(m));
    const auto moved = mbr::mbr_decode(list, {0, samples}, mbr::UtilityFunction::from_matrix(m2));
    c.expect(base.best_index == moved.best_index, "instance " + std::to_string(inst) + " selection");
    c.expect(pairwise_order(base.expected_utilities, mbr::tie_tolerance(m)) ==
                 pairwise_order(moved.expected_utilities, mbr::tie_tolerance(m2)),
             "instance " + std::to_string(inst) + " ranking");
  }
}

// 4. 200 + 50 hypotheses pruned to 50 MBR candidates, one output per segment.
void two_stage_shape(Checker& c) {
  std::mt19937_64 rng(4);
  const auto vocab = oracle::vocabulary(30);
  const WeightVector weights{{"model_ll", 1.0}, {"qe", 0.5}};
  std::vector<NBestList> ens, doc;
  for (SegmentId s = 0; s < 10; ++s) {
    const auto base = oracle::random_sentence(rng, vocab, 6, 14);
    ens.push_back(oracle::synthetic_nbest(rng, s, base, vocab, 200, Origin::ensemble));
    doc.push_back(oracle::synthetic_nbest(rng, s, base, vocab, 50, Origin::document));
  }
  for (std::size_t s = 0; s < ens.size(); ++s) {
    const auto r = mbr::two_stage_decode(ens[s], doc[s], weights, mbr::UtilityFunction::chrf(), {50, false, 2});
    c.expect(merge_nbest(ens[s], doc[s], false).size() == 250, "merged size");
    c.expect(r.pruned.size() == 50, "segment " + std::to_string(s) + " kept " + std::to_string(r.pruned.size()));
    c.expect(r.mbr.expected_utilities.size() == 50, "segment " + std::to_string(s) + " MBR candidates");
  }

  const auto dir = std::filesystem::temp_directory_path() / "qad_acceptance_pipeline";
  std::filesystem::create_directories(dir);
  io::write_file(dir / "ens.nbest", write_nbest_string(ens));
  io::write_file(dir / "doc.nbest", write_nbest_string(doc));
  io::write_file(dir / "w.tsv", "model_ll\t1\nqe\t0.5\n");
  std::ostringstream out, err;
  const int code = cli::dispatch({"pipeline", "qad", "--ensemble", (dir / "ens.nbest").string(), "--doc",
                                  (dir / "doc.nbest").string(), "--weights", (dir / "w.tsv").string(), "--k",
                                  "50", "--utility", "chrf"},
                                 out, err);
  c.expect(code == 0, "pipeline exit " + std::to_string(code) + ": " + err.str());
  c.expect(count_occurrences(out.str(), "\n") == 10, "pipeline printed " +
                                                          std::to_string(count_occurrences(out.str(), "\n")) +
                                                          " lines");
}

// 5. MERT improves on its start, competes with a coarse grid, and the envelope
// matches dense sampling.
void mert_soundness(Checker& c) {
  const auto start = Clock::now();
  const auto ts = oracle::synthetic_tuning_set(10, 20, 30);
  const WeightVector init{{"length", 1.0}, {"noise", 1.0}, {"quality", 0.0}};
  rerank::MertOptions opt;
  opt.restarts = 10;
  opt.seed = 1;
  const auto res = rerank::mert_tune(ts, init, opt);
  const double initial = oracle::brute_force_corpus_metric(ts, init, metrics::MetricKind::bleu);
  const double tuned = oracle::brute_force_corpus_metric(ts, res.weights, metrics::MetricKind::bleu);
  double grid_best = 0.0;
  const std::vector<double> grid{-1.0, -0.5, 0.0, 0.5, 1.0};
  for (double a : grid)
    for (double b : grid)
      for (double g : grid)
        if (a != 0 || b != 0 || g != 0)
          grid_best = std::max(grid_best, oracle::brute_force_corpus_metric(
                                              ts, {{"length", a}, {"noise", b}, {"quality", g}},
                                              metrics::MetricKind::bleu));
  c.expect(std::abs(tuned - res.metric) < 1e-9, "reported metric differs from re-evaluation");
  c.expect(tuned >= initial, "tuned " + format_number(tuned) + " < initial " + format_number(initial));
  c.expect(tuned >= grid_best - 0.1, "tuned " + format_number(tuned) + " < grid " + format_number(grid_best));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int set = 0; set < 50; ++set) {
    std::vector<double> b(50), m(50);
    for (std::size_t i = 0; i < 50; ++i) {
      b[i] = u(rng);
      m[i] = u(rng);
    }
    const auto env = rerank::upper_envelope(b, m);
    for (int s = 0; s < 1000; ++s) {
      const double gamma = -20.0 + 40.0 * s / 999.0 + 1e-7;
      std::size_t best = 0;
      for (std::size_t i = 1; i < 50; ++i)
        if (b[i] + gamma * m[i] > b[best] + gamma * m[best]) best = i;
      c.expect(env.argmax(gamma) == best, "line set " + std::to_string(set) + " at " + format_number(gamma));
    }
  }
  const double t = seconds_since(start);
  c.expect(t < 30.0, "took " + format_number(t) + " s");
}

// 6. Factor attachment and subword propagation reproduce both golden blocks.
void factors_golden(Checker& c) {
  std::vector<std::string> tokens, subwords;
  for (const auto& t : factors::parse_factored(oracle::kTokenBlock)) tokens.push_back(t.surface);
  for (const auto& t : factors::parse_factored(oracle::kSubwordBlock)) subwords.push_back(t.surface);
  const auto tagged = factors::attach_factors(tokens, oracle::kEntitySpans);
  c.expect(factors::write_factored(tagged) == oracle::kTokenBlock, "token block differs");
  const auto propagated = factors::propagate_to_subwords(tagged, subwords, "_");
  c.expect(factors::write_factored(propagated) == oracle::kSubwordBlock, "subword block differs");
}

// 7. Separator join/split round trips and lossless window packing.
void document_round_trip(Checker& c) {
  const auto joined = datapipe::join_sentences(oracle::kDocumentExample);
  c.expect(count_occurrences(joined, "<SEP>") == 4, "example separator count");
  c.expect(datapipe::split_doc_hypothesis(joined, 5) == oracle::kDocumentExample, "example split");

  std::mt19937_64 rng(7);
  const auto vocab = oracle::vocabulary(40);
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::string> group;
    for (std::size_t k = 0, n = 1 + rng() % 10; k < n; ++k)
      group.push_back(oracle::random_sentence(rng, vocab, 1, 15));
    c.expect(datapipe::split_doc_hypothesis(datapipe::join_sentences(group), group.size()) == group,
             "fuzz group " + std::to_string(i));
  }

  ParallelCorpus corpus;
  for (std::size_t doc = 0, begin = 0; doc < 40; ++doc) {
    const std::size_t n = 1 + rng() % 30;
    for (std::size_t i = 0; i < n; ++i)
      corpus.pairs.push_back({oracle::random_sentence(rng, vocab, 1, 60), oracle::random_sentence(rng, vocab, 1, 60)});
    corpus.documents.push_back({begin, begin + n});
    begin += n;
  }
  const auto d = datapipe::build_doc_dataset(corpus, datapipe::DocMode::window_250t);
  std::vector<std::string> src, tgt;
  for (const auto& s : d.samples) {
    c.expect(datapipe::whitespace_token_count(s.source) - (s.sentence_count - 1) <= 250,
             "sample over 250 source tokens");
    for (const auto& x : datapipe::split_doc_hypothesis(s.source, s.sentence_count)) src.push_back(x);
    for (const auto& x : datapipe::split_doc_hypothesis(s.target, s.sentence_count)) tgt.push_back(x);
  }
  bool lossless = src.size() == corpus.size() && tgt.size() == corpus.size();
  for (std::size_t i = 0; lossless && i < corpus.size(); ++i)
    lossless = src[i] == corpus.pairs[i].source && tgt[i] == corpus.pairs[i].target;
  c.expect(lossless, "window_250t samples do not reproduce the corpus");
  c.expect(d.samples.size() < corpus.size(), "no sentences were packed together");
}

// 8. Post-processing fixture table, rule coverage and idempotence.
void postprocess_suite(Checker& c) {
  const auto& fixtures = oracle::postprocess_fixtures();
  c.expect(fixtures.size() >= 30, "only " + std::to_string(fixtures.size()) + " fixtures");
  std::set<std::string> covered;
  for (const auto& f : fixtures) {
    postprocess::PostprocessConfig cfg;
    cfg.language = postprocess::parse_language(f.lang);
    if (!f.alignment.empty()) cfg.alignment = postprocess::parse_alignment(f.alignment);
    const auto out = postprocess::apply_rules(f.source, f.hypothesis, cfg);
    c.expect(out == f.expected, "'" + f.hypothesis + "' gave '" + out + "'");
    cfg.alignment.reset();
    c.expect(postprocess::apply_rules(f.source, out, cfg) == out, "not idempotent on '" + f.hypothesis + "'");
    covered.insert(f.rules.begin(), f.rules.end());
  }
  for (auto rule : postprocess::kAllRules)
    c.expect(covered.count(std::string(postprocess::rule_id(rule))) == 1,
             "no fixture for " + std::string(postprocess::rule_id(rule)));
}

// 9. Indexed retrieval equals a full scan; match counts shrink with the threshold.
void tm_oracle(Checker& c) {
  const auto planted = oracle::planted_tm_corpus(9, 1000, 60);
  const auto index = tm::TmIndex::build(planted.corpus);
  std::mt19937_64 rng(9);
  auto queries = planted.queries;
  const auto vocab = oracle::vocabulary(300);
  for (int i = 0; i < 40; ++i) queries.push_back(oracle::random_sentence(rng, vocab, 3, 15));
  std::size_t previous = SIZE_MAX;
  for (double th : {0.19, 0.25, 0.4}) {
    std::size_t matched = 0;
    for (const auto& q : queries) {
      const auto got = index.query(q, 10, th);
      c.expect(got == oracle::naive_tm_query(planted.corpus, q, 10, th), "'" + q + "' at " + format_number(th));
      matched += got.size();
    }
    c.expect(matched <= previous, "count grew at " + format_number(th));
    c.expect(matched > 0, "no matches at " + format_number(th));
    previous = matched;
  }
}

// 10. Paired bootstrap: clear winner, identical systems, reproducibility.
void bootstrap_sanity(Checker& c) {
  const auto refs = io::read_lines(data("desk2.ref"));
  std::mt19937_64 rng(10);
  const auto vocab = oracle::vocabulary(50);
  std::vector<std::string> random_sys;
  for (std::size_t i = 0; i < refs.size(); ++i) random_sys.push_back(oracle::random_sentence(rng, vocab, 5, 20));
  for (auto kind : {metrics::MetricKind::bleu, metrics::MetricKind::chrf}) {
    const auto name = std::string(metrics::metric_name(kind));
    const auto r = metrics::paired_bootstrap(kind, refs, random_sys, refs, 1000, 42);
    c.expect(r.p_value < 0.05, name + " p = " + format_number(r.p_value));
    c.expect(r.winner == 'a', name + " winner");
    const auto same = metrics::paired_bootstrap(kind, refs, refs, refs, 1000, 42);
    c.expect(same.p_value == 1.0, name + " identical p = " + format_number(same.p_value));
  }
  std::string first;
  for (int run = 0; run < 2; ++run) {
    std::ostringstream out, err;
    cli::dispatch({"--threads", run ? "8" : "1", "metrics", "bootstrap", "--metric", "bleu", "--hyp-a",
                   data("desk1.hyp"), "--hyp-b", data("desk2.hyp"), "--ref", data("desk1.ref"), "--trials",
                   "1000"},
                  out, err);
    if (run == 0) first = out.str();
    c.expect(!out.str().empty() && out.str() == first, "rerun output differs");
  }
}

// 11. Every CLI subcommand is byte-identical across reruns and thread counts.
void cli_determinism(Checker& c) {
  const oracle::CliFixture fixture(std::filesystem::temp_directory_path() / "qad_acceptance_cli");
  std::set<std::string> covered;
  for (const auto& [name, args] : fixture.commands()) {
    covered.insert(name);
    auto with_threads = [&args](const std::string& n) {
      auto a = args;
      a.insert(a.begin(), {"--threads", n, "--seed", "3"});
      return a;
    };
    const auto a = fixture.run(with_threads("1"), "a");
    const auto b = fixture.run(with_threads("1"), "b");
    const auto d = fixture.run(with_threads("8"), "c");
    c.expect(a.code == 0, name + " exit " + std::to_string(a.code) + ": " + a.err);
    c.expect(a == b, name + " differs between reruns");
    c.expect(a == d, name + " differs between 1 and 8 threads");
  }
  c.expect(covered.size() == 19, "covers " + std::to_string(covered.size()) + " subcommands");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Checker&)>>> criteria{
      {"metric parity with sacreBLEU 2.0.0", metric_parity},
      {"MBR matches naive oracle", mbr_oracle},
      {"MBR affine invariance", mbr_affine},
      {"two-stage pipeline shape", two_stage_shape},
      {"MERT soundness and envelope", mert_soundness},
      {"factored sentence golden blocks", factors_golden},
      {"document join/split and windows", document_round_trip},
      {"post-processing fixtures", postprocess_suite},
      {"TM retrieval equals full scan", tm_oracle},
      {"bootstrap sanity", bootstrap_sanity},
      {"CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Checker c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (c.ok() ? "PASS" : "FAIL") << ' ' << i + 1 << ' ' << criteria[i].first;
    if (!c.ok()) std::cout << ": " << c.summary();
    std::cout << '\n';
    failed += !c.ok();
  }
  return failed == 0 ? 0 : 1;
}
