#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <memory>
#include <ostream>
#include <sstream>

#include "commands.hpp"
#include "qad/core/error.hpp"
#include "qad/core/io.hpp"
#include "qad/core/nbest.hpp"
#include "qad/datapipe/docdata.hpp"
#include "qad/datapipe/filter.hpp"
#include "qad/factors/factors.hpp"
#include "qad/postprocess/rules.hpp"
#include "qad/text/utf8.hpp"
#include "qad/tm/index.hpp"
#include "qad/util/parallel.hpp"

namespace qad::cli {

namespace {

std::ifstream open_input(const std::string& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

// Runs a stream parser on a file; parse errors are prefixed with the path.
template <class F>
auto parse_file(const std::string& path, F&& parse) {
  auto in = open_input(path);
  try {
    return parse(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.detail(), e.line());
  }
}

std::vector<std::string> whitespace_tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::vector<factors::FactoredSentence> read_factored(const std::string& path) {
  std::vector<factors::FactoredSentence> out;
  const auto lines = io::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      out.push_back(factors::parse_factored(lines[i]));
    } catch (const DataError& e) {
      throw ParseError(path + ": " + e.what(), i + 1);
    }
  }
  return out;
}

void write_ranges(std::ostream& out, const std::vector<datapipe::DocSample>& samples) {
  for (const auto& s : samples) out << s.first << ' ' << s.first + s.sentence_count << '\n';
}

}  // namespace

// --- factors ----------------------------------------------------------------

void add_factors_commands(CLI::App& app, Context& ctx) {
  auto* group = app.add_subcommand("factors", "Named-entity source factors");
  group->require_subcommand(1);

  struct TagOpts {
    std::string tokens, gazetteer, spans;
  };
  auto to = std::make_shared<TagOpts>();
  auto* tag = group->add_subcommand("tag", "Attach p0-p6 factors to tokenized sentences");
  tag->add_option("--tokens", to->tokens, "Tokenized sentences, one per line")->required();
  auto* gaz = tag->add_option("--gazetteer", to->gazetteer, "Phrase list (phrase<TAB>CATEGORY)");
  auto* spans = tag->add_option("--spans", to->spans, "Stand-off spans (sent_id start end CATEGORY)");
  gaz->excludes(spans);
  tag->callback([to, &ctx] {
    ctx.action = [to, &ctx] {
      if (to->gazetteer.empty() == to->spans.empty())
        throw CLI::ValidationError("give exactly one of --gazetteer and --spans");
      const auto lines = io::read_lines(to->tokens);
      std::optional<factors::Gazetteer> gazetteer;
      std::map<std::size_t, std::vector<factors::EntitySpan>> standoff;
      if (!to->gazetteer.empty()) gazetteer = parse_file(to->gazetteer, factors::parse_gazetteer);
      else standoff = parse_file(to->spans, factors::parse_standoff);
      if (!standoff.empty() && standoff.rbegin()->first >= lines.size())
        throw DataError(to->spans + ": sentence id " + std::to_string(standoff.rbegin()->first) +
                        " beyond the " + std::to_string(lines.size()) + " lines of " + to->tokens);
      for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto tokens = whitespace_tokens(lines[i]);
        std::vector<factors::EntitySpan> s;
        if (gazetteer) {
          s = gazetteer->tag(tokens);
        } else if (auto it = standoff.find(i); it != standoff.end()) {
          s = it->second;
        }
        try {
          *ctx.out << factors::write_factored(factors::attach_factors(tokens, s)) << '\n';
        } catch (const DataError& e) {
          throw DataError(to->tokens + ":" + std::to_string(i + 1) + ": " + e.what());
        }
      }
    };
  });

  struct PropOpts {
    std::string factored, subwords, marker{factors::kDefaultSubwordMarker};
  };
  auto po = std::make_shared<PropOpts>();
  auto* prop = group->add_subcommand("propagate", "Copy token factors onto their subwords");
  prop->add_option("--factored", po->factored, "Factored token sentences")->required();
  prop->add_option("--subwords", po->subwords, "Subword-segmented sentences, line-aligned")->required();
  prop->add_option("--marker", po->marker, "Word-initial subword marker (default U+2581)");
  prop->callback([po, &ctx] {
    ctx.action = [po, &ctx] {
      const auto sentences = read_factored(po->factored);
      const auto subwords = io::read_lines(po->subwords);
      if (subwords.size() != sentences.size())
        throw DataError(po->subwords + ": " + std::to_string(subwords.size()) + " lines, " + po->factored +
                        " has " + std::to_string(sentences.size()));
      for (std::size_t i = 0; i < sentences.size(); ++i) {
        try {
          *ctx.out << factors::write_factored(
                          factors::propagate_to_subwords(sentences[i], whitespace_tokens(subwords[i]), po->marker))
                   << '\n';
        } catch (const DataError& e) {
          throw DataError(po->subwords + ":" + std::to_string(i + 1) + ": " + e.what());
        }
      }
    };
  });

  auto factored = std::make_shared<std::string>();
  auto* count = group->add_subcommand("count", "Count entity occurrences per category");
  count->add_option("--factored", *factored, "Factored sentences")->required();
  count->callback([factored, &ctx] {
    ctx.action = [factored, &ctx] {
      const auto corpus = read_factored(*factored);
      for (const auto& [category, n] : factors::count_categories(corpus))
        *ctx.out << factors::category_name(category) << '\t' << n << '\n';
    };
  });
}

// --- docdata ----------------------------------------------------------------

void add_docdata_commands(CLI::App& app, Context& ctx) {
  auto* group = app.add_subcommand("docdata", "Document-level training data");
  group->require_subcommand(1);

  struct BuildOpts {
    std::string corpus, src, tgt, docs, src_subwords, tgt_subwords, chunks;
    std::vector<std::string> modes;
    bool shuffle = false;
  };
  auto bo = std::make_shared<BuildOpts>();
  auto* build = group->add_subcommand("build", "Build context-augmented samples (source<TAB>target)");
  build->add_option("--corpus", bo->corpus, "Parallel corpus as source<TAB>target lines");
  build->add_option("--src", bo->src, "Source side, one sentence per line");
  build->add_option("--tgt", bo->tgt, "Target side, one sentence per line");
  build->add_option("--docs", bo->docs, "Document ranges ('begin end' per line)");
  build->add_option("--mode", bo->modes,
                    "curr, prev_curr, window_50t, window_100t, window_250t or window_500t; "
                    "repeat to merge several datasets")
      ->required();
  build->add_flag("--synthetic-shuffle", bo->shuffle,
                  "Also build from all sentences shuffled into one pseudo-document");
  build->add_option("--src-subwords", bo->src_subwords, "Subword-segmented source used for token counts");
  build->add_option("--tgt-subwords", bo->tgt_subwords, "Subword-segmented target used for token counts");
  build->add_option("--chunks", bo->chunks, "Write each sample's sentence range here");
  build->callback([bo, &ctx] {
    ctx.action = [bo, &ctx] {
      const auto corpus = load_corpus(bo->corpus, bo->src, bo->tgt, bo->docs);
      std::vector<datapipe::DocMode> modes;
      for (const auto& m : bo->modes) modes.push_back(datapipe::parse_doc_mode(m));
      if (bo->src_subwords.empty() != bo->tgt_subwords.empty())
        throw CLI::ValidationError("--src-subwords and --tgt-subwords go together");
      const bool merged = modes.size() > 1 || bo->shuffle;
      if (merged && !bo->chunks.empty())
        throw CLI::ValidationError("--chunks needs a single --mode without --synthetic-shuffle");

      datapipe::SentenceLengths lengths = datapipe::measure(corpus, datapipe::whitespace_token_count);
      if (!bo->src_subwords.empty()) {
        const auto s = io::read_lines(bo->src_subwords);
        const auto t = io::read_lines(bo->tgt_subwords);
        if (s.size() != corpus.size() || t.size() != corpus.size())
          throw DataError("subword files must have " + std::to_string(corpus.size()) + " lines");
        for (std::size_t i = 0; i < corpus.size(); ++i) {
          lengths.source[i] = datapipe::whitespace_token_count(s[i]);
          lengths.target[i] = datapipe::whitespace_token_count(t[i]);
        }
      }

      std::vector<datapipe::DocDataset> datasets;
      for (auto mode : modes) datasets.push_back(datapipe::build_doc_dataset(corpus, mode, lengths));
      if (bo->shuffle) {
        // Permute the length vectors the same way as the sentences.
        ParallelCorpus indexed;
        for (std::size_t i = 0; i < corpus.size(); ++i) indexed.pairs.push_back({std::to_string(i), ""});
        const auto order = datapipe::synthetic_shuffle(indexed, ctx.seed);
        const auto shuffled = datapipe::synthetic_shuffle(corpus, ctx.seed);
        datapipe::SentenceLengths sl;
        for (const auto& p : order.pairs) {
          const auto i = static_cast<std::size_t>(std::stoull(p.source));
          sl.source.push_back(lengths.source[i]);
          sl.target.push_back(lengths.target[i]);
        }
        for (auto mode : modes) datasets.push_back(datapipe::build_doc_dataset(shuffled, mode, sl));
      }

      std::vector<datapipe::DocSample> samples =
          merged ? datapipe::merge_datasets(datasets, ctx.seed) : datasets.front().samples;
      std::size_t over = 0, overflow = 0;
      for (const auto& d : datasets) {
        over += d.over_budget;
        overflow += d.target_overflow;
      }
      for (const auto& s : samples) *ctx.out << s.source << '\t' << s.target << '\n';
      if (!bo->chunks.empty()) {
        std::ostringstream ranges;
        write_ranges(ranges, samples);
        io::write_file(bo->chunks, ranges.str());
      }
      *ctx.err << "samples=" << samples.size() << '\n'
               << "over_budget=" << over << '\n'
               << "target_overflow=" << overflow << '\n';
    };
  });

  struct SplitOpts {
    std::string hyp, nbest, chunks;
  };
  auto so = std::make_shared<SplitOpts>();
  auto* split = group->add_subcommand("split", "Split <SEP>-joined outputs back into sentences");
  auto* hyp = split->add_option("--hyp", so->hyp, "Document outputs, one per chunk line");
  auto* nbest = split->add_option("--nbest", so->nbest, "Document n-best file (segment id = chunk index)");
  hyp->excludes(nbest);
  split->add_option("--chunks", so->chunks, "Chunk ranges ('begin end' per line)")->required();
  split->callback([so, &ctx] {
    ctx.action = [so, &ctx] {
      if (so->hyp.empty() == so->nbest.empty()) throw CLI::ValidationError("give exactly one of --hyp and --nbest");
      const auto chunks = io::read_document_ranges(so->chunks);
      if (!so->hyp.empty()) {
        const auto lines = io::read_lines(so->hyp);
        if (lines.size() != chunks.size())
          throw DataError(so->hyp + ": " + std::to_string(lines.size()) + " lines for " +
                          std::to_string(chunks.size()) + " chunks");
        for (std::size_t i = 0; i < lines.size(); ++i) {
          try {
            for (const auto& s : datapipe::split_doc_hypothesis(lines[i], chunks[i].end - chunks[i].begin))
              *ctx.out << s << '\n';
          } catch (const DataError& e) {
            throw DataError(so->hyp + ":" + std::to_string(i + 1) + ": " + e.what());
          }
        }
        return;
      }
      const auto split = datapipe::split_doc_nbest(io::read_nbest(so->nbest, Origin::document), chunks);
      write_nbest(*ctx.out, split.lists);
      *ctx.err << "hypotheses=" << split.report.hypotheses << '\n'
               << "kept=" << split.report.kept << '\n'
               << "discarded=" << split.report.discarded << '\n';
    };
  });
}

// --- filter -----------------------------------------------------------------

void add_filter_commands(CLI::App& app, Context& ctx) {
  auto* group = app.add_subcommand("filter", "Parallel corpus cleaning");
  group->require_subcommand(1);

  struct Opts {
    std::string corpus, src, tgt, docs, out;
    datapipe::FilterConfig cfg;
    bool no_dedupe = false, no_normalize = false, no_strip = false, prefiltered = false;
  };
  auto o = std::make_shared<Opts>();
  auto* run = group->add_subcommand("run", "Normalize, length/ratio filter and deduplicate");
  run->add_option("--corpus", o->corpus, "Parallel corpus as source<TAB>target lines");
  run->add_option("--src", o->src, "Source side");
  run->add_option("--tgt", o->tgt, "Target side");
  run->add_option("--docs", o->docs, "Document ranges ('begin end' per line)");
  run->add_option("--min-len", o->cfg.min_len, "Minimum tokens per side")->capture_default_str();
  run->add_option("--max-len", o->cfg.max_len, "Maximum tokens per side")->capture_default_str();
  run->add_option("--max-ratio", o->cfg.max_ratio, "Maximum longer/shorter length ratio")->capture_default_str();
  run->add_flag("--no-dedupe", o->no_dedupe, "Keep duplicate pairs");
  run->add_flag("--no-normalize", o->no_normalize, "Skip punctuation normalization");
  run->add_flag("--no-strip", o->no_strip, "Keep non-printing characters");
  run->add_flag("--prefiltered", o->prefiltered, "Input is already clean: only normalize and report");
  run->add_option("--out", o->out, "Write the kept corpus (TSV) here; the report then goes to stdout");
  run->callback([o, &ctx] {
    ctx.action = [o, &ctx] {
      auto cfg = o->cfg;
      cfg.dedupe = !o->no_dedupe;
      cfg.normalize_punct = !o->no_normalize;
      cfg.strip_nonprinting = !o->no_strip;
      if (o->prefiltered) {
        cfg.dedupe = false;
        cfg.min_len = 1;
        cfg.max_len = std::numeric_limits<std::size_t>::max();
        cfg.max_ratio = std::numeric_limits<double>::infinity();
      }
      try {
        datapipe::validate(cfg);
      } catch (const DataError& e) {
        throw CLI::ValidationError(e.what());
      }
      const auto result = datapipe::filter_corpus(load_corpus(o->corpus, o->src, o->tgt, o->docs), cfg);
      if (o->out.empty()) {
        io::write_tsv_corpus(*ctx.out, result.corpus);
        datapipe::write_report(*ctx.err, result.report);
      } else {
        std::ostringstream tsv;
        io::write_tsv_corpus(tsv, result.corpus);
        io::write_file(o->out, tsv.str());
        datapipe::write_report(*ctx.out, result.report);
      }
    };
  });
}

// --- postprocess ------------------------------------------------------------

void add_postprocess_commands(CLI::App& app, Context& ctx) {
  auto* group = app.add_subcommand("postprocess", "Rule-based output repair");
  group->require_subcommand(1);

  struct Opts {
    std::string src, hyp, lang = "other", align, rules;
    bool trace = false;
  };
  auto o = std::make_shared<Opts>();
  auto* run = group->add_subcommand("run", "Apply the repair rules line by line");
  run->add_option("--src", o->src, "Source sentences")->required();
  run->add_option("--hyp", o->hyp, "Translations, line-aligned with --src")->required();
  run->add_option("--lang", o->lang, "Target language code (cs, uk, other)")->capture_default_str();
  run->add_option("--align", o->align, "Word alignments ('i-j' pairs per line)");
  run->add_option("--rules", o->rules, "Comma-separated rule ids r1..r7 (default: all)");
  run->add_flag("--trace", o->trace, "Print line<TAB>rule<TAB>before<TAB>after for every rule");
  run->callback([o, &ctx] {
    ctx.action = [o, &ctx] {
      const auto src = io::read_lines(o->src);
      const auto hyp = io::read_lines(o->hyp);
      if (src.size() != hyp.size())
        throw DataError(o->hyp + ": " + std::to_string(hyp.size()) + " lines, " + o->src + " has " +
                        std::to_string(src.size()));
      postprocess::PostprocessConfig base;
      base.language = postprocess::parse_language(o->lang);
      if (!o->rules.empty()) {
        std::vector<postprocess::Rule> rules;
        std::istringstream in(o->rules);
        for (std::string id; std::getline(in, id, ',');) {
          try {
            rules.push_back(postprocess::parse_rule(id));
          } catch (const DataError& e) {
            throw CLI::ValidationError(e.what());
          }
        }
        base.set_rules(rules);
      }
      std::vector<std::string> align;
      if (!o->align.empty()) {
        align = io::read_lines(o->align);
        if (align.size() != src.size())
          throw DataError(o->align + ": " + std::to_string(align.size()) + " lines, " + o->src + " has " +
                          std::to_string(src.size()));
      }
      std::vector<std::string> out(src.size());
      parallel_for(src.size(), ctx.threads, [&](std::size_t i) {
        auto cfg = base;
        if (!align.empty()) {
          try {
            cfg.alignment = postprocess::parse_alignment(align[i]);
          } catch (const DataError& e) {
            throw ParseError(o->align + ": " + e.what(), i + 1);
          }
        }
        if (!o->trace) {
          out[i] = postprocess::apply_rules(src[i], hyp[i], cfg) + '\n';
          return;
        }
        for (const auto& step : postprocess::rule_trace(src[i], hyp[i], cfg))
          out[i] += std::to_string(i + 1) + '\t' + std::string(postprocess::rule_id(step.rule)) + '\t' +
                    step.before + '\t' + step.after + '\n';
      });
      for (const auto& s : out) *ctx.out << s;
    };
  });
}

// --- tm ---------------------------------------------------------------------

void add_tm_commands(CLI::App& app, Context& ctx) {
  auto* group = app.add_subcommand("tm", "Translation memory retrieval");
  group->require_subcommand(1);

  struct IndexOpts {
    std::string corpus, src, tgt, out;
  };
  auto io_ = std::make_shared<IndexOpts>();
  auto* index = group->add_subcommand("index", "Build a binary index over a parallel corpus");
  index->add_option("--corpus", io_->corpus, "Parallel corpus as source<TAB>target lines");
  index->add_option("--src", io_->src, "Source side");
  index->add_option("--tgt", io_->tgt, "Target side");
  index->add_option("--out", io_->out, "Index file to write")->required();
  index->callback([io_, &ctx] {
    ctx.action = [io_, &ctx] {
      const auto idx = tm::TmIndex::build(load_corpus(io_->corpus, io_->src, io_->tgt, ""));
      std::ostringstream bytes(std::ios::binary);
      idx.save(bytes);
      io::write_file(io_->out, bytes.str());
      *ctx.out << "pairs=" << idx.size() << '\n' << "vocabulary=" << idx.vocabulary_size() << '\n';
    };
  });

  auto load_index = [](const std::string& path) {
    auto in = open_input(path, std::ios::binary);
    try {
      return tm::TmIndex::load(in);
    } catch (const DataError& e) {
      throw DataError(path + ": " + e.what());
    }
  };

  struct QueryOpts {
    std::string index, input, out;
    std::size_t k = 5;
    double threshold = 0.4;
  };
  auto add_query_options = [](CLI::App* sub, QueryOpts& q) {
    sub->add_option("--index", q.index, "Index file from 'tm index'")->required();
    sub->add_option("--input", q.input, "Query sentences, one per line")->required();
    sub->add_option("--k", q.k, "Matches per query")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--threshold", q.threshold, "Minimum fuzzy-match similarity")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
  };

  auto qo = std::make_shared<QueryOpts>();
  auto* query = group->add_subcommand("query", "Print the best fuzzy matches per input line");
  add_query_options(query, *qo);
  query->callback([qo, &ctx, load_index] {
    ctx.action = [qo, &ctx, load_index] {
      const auto idx = load_index(qo->index);
      const auto inputs = io::read_lines(qo->input);
      const auto r = tm::extract_adaptation_sets(idx, inputs, qo->k, qo->threshold, ctx.threads);
      tm::write_adaptation_sets(*ctx.out, r.sets);
    };
  });

  auto ao = std::make_shared<QueryOpts>();
  auto* adapt = group->add_subcommand("adapt-set", "Collect per-input adaptation sets and statistics");
  add_query_options(adapt, *ao);
  adapt->add_option("--out", ao->out, "Write the adaptation sets (TSV) here")->required();
  adapt->callback([ao, &ctx, load_index] {
    ctx.action = [ao, &ctx, load_index] {
      const auto idx = load_index(ao->index);
      const auto inputs = io::read_lines(ao->input);
      const auto r = tm::extract_adaptation_sets(idx, inputs, ao->k, ao->threshold, ctx.threads);
      std::ostringstream sets;
      tm::write_adaptation_sets(sets, r.sets);
      io::write_file(ao->out, sets.str());
      tm::write_stats(*ctx.out, r.stats);
    };
  });
}

}  // namespace qad::cli
