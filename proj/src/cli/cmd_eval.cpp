#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "commands.hpp"
#include "qad/core/error.hpp"
#include "qad/core/io.hpp"
#include "qad/core/nbest.hpp"
#include "qad/datapipe/docdata.hpp"
#include "qad/mbr/decode.hpp"
#include "qad/metrics/bootstrap.hpp"
#include "qad/metrics/metric.hpp"
#include "qad/rerank/grid.hpp"
#include "qad/rerank/mert.hpp"
#include "qad/rerank/rescore.hpp"
#include "qad/util/parallel.hpp"

namespace qad::cli {

namespace {

rerank::TuningSet load_tuning_set(const std::string& nbest, const std::string& refs,
                                  const std::vector<std::string>& columns) {
  rerank::TuningSet ts;
  ts.lists = io::read_nbest(nbest);
  attach_columns(ts.lists, columns);
  ts.references = io::read_lines(refs);
  for (const auto& list : ts.lists)
    if (list.segment_id < 0 || static_cast<std::size_t>(list.segment_id) >= ts.references.size())
      throw DataError(nbest + ": segment " + std::to_string(list.segment_id) + " has no line in " + refs);
  return ts;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t b = 0;
  while (true) {
    const auto e = s.find(',', b);
    out.push_back(s.substr(b, e == std::string::npos ? std::string::npos : e - b));
    if (e == std::string::npos) break;
    b = e + 1;
  }
  return out;
}

/// Matrix per list, in list order, from a multi-block matrix file.
std::vector<Eigen::MatrixXd> load_matrices(const std::string& path, std::size_t lists) {
  if (path.empty()) throw CLI::ValidationError("--utility external-matrix requires --matrix FILE");
  auto matrices = mbr::read_utility_matrices(path);
  if (matrices.size() != lists)
    throw DataError(path + ": holds " + std::to_string(matrices.size()) + " matrices for " +
                    std::to_string(lists) + " segments");
  return matrices;
}

mbr::UtilityFunction utility_for(mbr::UtilityKind kind, const std::vector<Eigen::MatrixXd>& matrices,
                                 std::size_t i) {
  if (kind == mbr::UtilityKind::external_matrix) return mbr::UtilityFunction::from_matrix(matrices[i]);
  return {kind, {}};
}

}  // namespace

// --- metrics ----------------------------------------------------------------

void add_metrics_commands(CLI::App& app, Context& ctx) {
  auto* group = app.add_subcommand("metrics", "Corpus metrics and significance testing");
  group->require_subcommand(1);

  struct ScoreOpts {
    std::string metric = "chrf", hyp, ref, scores;
  };
  auto so = std::make_shared<ScoreOpts>();
  auto* score = group->add_subcommand("score", "Score a system against references");
  score->add_option("--metric", so->metric, "bleu, chrf or external")->capture_default_str();
  score->add_option("--hyp", so->hyp, "System output, one segment per line")->required();
  score->add_option("--ref", so->ref, "References, one segment per line")->required();
  score->add_option("--scores", so->scores, "Per-sentence scores for the external metric");
  score->callback([so, &ctx] {
    ctx.action = [so, &ctx] {
      const auto kind = metrics::parse_metric_kind(so->metric);
      const auto hyps = io::read_lines(so->hyp);
      const auto refs = io::read_lines(so->ref);
      std::vector<double> ext;
      if (kind == metrics::MetricKind::external) {
        if (so->scores.empty()) throw CLI::ValidationError("--metric external requires --scores FILE");
        ext = io::read_reals(so->scores);
      }
      const auto result = metrics::corpus_metric(kind, hyps, refs, ext);
      *ctx.out << fixed2(result.score.value) << '\t' << result.score.signature << '\n';
    };
  });

  struct BootOpts {
    std::string metric = "chrf", hyp_a, hyp_b, ref, scores_a, scores_b;
    std::size_t trials = 1000;
  };
  auto bo = std::make_shared<BootOpts>();
  auto* boot = group->add_subcommand("bootstrap", "Paired bootstrap resampling of two systems");
  boot->add_option("--metric", bo->metric, "bleu, chrf or external")->capture_default_str();
  boot->add_option("--hyp-a", bo->hyp_a, "First system")->required();
  boot->add_option("--hyp-b", bo->hyp_b, "Second system")->required();
  boot->add_option("--ref", bo->ref, "References")->required();
  boot->add_option("--scores-a", bo->scores_a, "External per-sentence scores of system a");
  boot->add_option("--scores-b", bo->scores_b, "External per-sentence scores of system b");
  boot->add_option("--trials", bo->trials, "Resampling trials")->capture_default_str()->check(CLI::PositiveNumber);
  boot->callback([bo, &ctx] {
    ctx.action = [bo, &ctx] {
      const auto kind = metrics::parse_metric_kind(bo->metric);
      const auto a = io::read_lines(bo->hyp_a);
      const auto b = io::read_lines(bo->hyp_b);
      const auto refs = io::read_lines(bo->ref);
      std::vector<double> ea, eb;
      if (kind == metrics::MetricKind::external) {
        if (bo->scores_a.empty() || bo->scores_b.empty())
          throw CLI::ValidationError("--metric external requires --scores-a and --scores-b");
        ea = io::read_reals(bo->scores_a);
        eb = io::read_reals(bo->scores_b);
      }
      const auto r = metrics::paired_bootstrap(kind, a, b, refs, bo->trials, ctx.seed, ctx.threads, ea, eb);
      auto& out = *ctx.out;
      out << "metric=" << metrics::metric_name(kind) << '\n'
          << "signature=" << r.score_a.signature << '\n'
          << "score_a=" << fixed2(r.score_a.value) << '\n'
          << "score_b=" << fixed2(r.score_b.value) << '\n'
          << "winner=" << r.winner << '\n'
          << "trials=" << r.trials << '\n'
          << "p_value=" << format_number(r.p_value) << '\n';
    };
  });
}

// --- rerank -----------------------------------------------------------------

void add_rerank_commands(CLI::App& app, Context& ctx) {
  auto* group = app.add_subcommand("rerank", "Linear n-best reranking, MERT and grid search");
  group->require_subcommand(1);

  struct ApplyOpts {
    std::string nbest, weights;
    std::vector<std::string> columns;
    std::size_t k = 0;
  };

  auto ao = std::make_shared<ApplyOpts>();
  auto* apply = group->add_subcommand("apply", "Rescore and re-sort n-best lists");
  apply->add_option("--nbest", ao->nbest, "N-best file")->required();
  apply->add_option("--weights", ao->weights, "Weights file (name<TAB>value)")->required();
  apply->add_option("--column", ao->columns, "Extra feature column name=FILE (one value per hypothesis)");
  apply->callback([ao, &ctx] {
    ctx.action = [ao, &ctx] {
      auto lists = io::read_nbest(ao->nbest);
      attach_columns(lists, ao->columns);
      const auto w = io::read_weights(ao->weights);
      for (auto& list : lists) list = rerank::rescore(list, w);
      write_nbest(*ctx.out, lists);
    };
  });

  auto po = std::make_shared<ApplyOpts>();
  po->k = 50;
  auto* prune = group->add_subcommand("prune", "Keep the k best hypotheses per segment");
  prune->add_option("--nbest", po->nbest, "N-best file")->required();
  prune->add_option("--weights", po->weights, "Weights file")->required();
  prune->add_option("--column", po->columns, "Extra feature column name=FILE");
  prune->add_option("--k", po->k, "Hypotheses to keep")->capture_default_str()->check(CLI::PositiveNumber);
  prune->callback([po, &ctx] {
    ctx.action = [po, &ctx] {
      auto lists = io::read_nbest(po->nbest);
      attach_columns(lists, po->columns);
      const auto w = io::read_weights(po->weights);
      for (auto& list : lists) list = rerank::prune_topk(list, w, po->k);
      write_nbest(*ctx.out, lists);
    };
  });

  struct TuneOpts {
    std::string nbest, refs, metric = "bleu", init, report, external_feature = "external";
    std::vector<std::string> columns;
    std::size_t restarts = 1;
  };
  auto to = std::make_shared<TuneOpts>();
  auto* tune = group->add_subcommand("tune", "MERT: tune weights to maximize a corpus metric");
  tune->add_option("--nbest", to->nbest, "N-best file")->required();
  tune->add_option("--ref", to->refs, "References, line = segment id")->required();
  tune->add_option("--metric", to->metric, "bleu, chrf or external")->capture_default_str();
  tune->add_option("--init", to->init, "Initial weights (default: 1 for every feature)");
  tune->add_option("--restarts", to->restarts, "Restarts; restart 0 uses the initial weights")
      ->capture_default_str()->check(CLI::PositiveNumber);
  tune->add_option("--column", to->columns, "Extra feature column name=FILE");
  tune->add_option("--external-feature", to->external_feature,
                   "Feature holding per-hypothesis scores for --metric external")->capture_default_str();
  tune->add_option("--report", to->report, "Write the per-step tuning report (TSV) here");
  tune->callback([to, &ctx] {
    ctx.action = [to, &ctx] {
      const auto ts = load_tuning_set(to->nbest, to->refs, to->columns);
      rerank::MertOptions opt;
      opt.metric = metrics::parse_metric_kind(to->metric);
      opt.restarts = to->restarts;
      opt.seed = ctx.seed;
      opt.threads = ctx.threads;
      opt.external_feature = to->external_feature;
      WeightVector init;
      if (!to->init.empty()) {
        init = io::read_weights(to->init);
      } else {
        for (const auto& list : ts.lists) {
          if (list.empty()) continue;
          for (const auto& [name, value] : list.hypotheses.front().features)
            if (name != to->external_feature) init[name] = 1.0;
          break;
        }
      }
      const auto result = rerank::mert_tune(ts, init, opt);
      io::write_weights(*ctx.out, result.weights);
      if (!to->report.empty()) {
        std::ostringstream report;
        rerank::write_tuning_report(report, result.trace);
        io::write_file(to->report, report.str());
      }
      *ctx.err << "metric " << fixed2(result.initial_metric) << " -> " << fixed2(result.metric) << '\n';
    };
  });

  struct GridOpts {
    std::string nbest, refs, metric = "bleu", weights_out, external_feature = "external";
    std::vector<std::string> grid, columns, multiplicity;
  };
  auto go = std::make_shared<GridOpts>();
  auto* grid = group->add_subcommand("grid", "Grid search over per-model weights");
  grid->add_option("--nbest", go->nbest, "N-best file with one score feature per model")->required();
  grid->add_option("--ref", go->refs, "References, line = segment id")->required();
  grid->add_option("--metric", go->metric, "bleu, chrf or external")->capture_default_str();
  grid->add_option("--grid", go->grid, "Axis name=v1,v2,... (repeatable)")->required();
  grid->add_option("--multiplicity", go->multiplicity, "Model multiplicity name=N, e.g. A=2");
  grid->add_option("--column", go->columns, "Model score column name=FILE");
  grid->add_option("--external-feature", go->external_feature,
                   "Feature holding per-hypothesis scores for --metric external")->capture_default_str();
  grid->add_option("--weights-out", go->weights_out, "Write the best weights here");
  grid->callback([go, &ctx] {
    ctx.action = [go, &ctx] {
      const auto ts = load_tuning_set(go->nbest, go->refs, go->columns);
      std::vector<rerank::GridAxis> axes;
      for (const auto& spec : go->grid) axes.push_back(rerank::parse_grid_axis(spec));
      for (const auto& spec : go->multiplicity) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--multiplicity expects name=N");
        const auto name = spec.substr(0, eq);
        const double m = parse_number(spec.substr(eq + 1));
        if (m < 1 || m != static_cast<int>(m)) throw CLI::ValidationError("multiplicity must be a positive integer");
        bool found = false;
        for (auto& axis : axes)
          if (axis.model_label == name) {
            axis.multiplicity = static_cast<int>(m);
            found = true;
          }
        if (!found) throw CLI::ValidationError("--multiplicity names unknown axis '" + name + "'");
      }
      const auto r = rerank::grid_search_weights(ts, axes, metrics::parse_metric_kind(go->metric),
                                                 go->external_feature, ctx.threads);
      *ctx.out << "spec=" << r.best.to_string() << '\n'
               << "metric=" << fixed2(r.metric) << '\n'
               << "evaluated=" << r.evaluated << '\n';
      if (!go->weights_out.empty()) {
        std::ostringstream w;
        io::write_weights(w, r.best.to_weights());
        io::write_file(go->weights_out, w.str());
      }
    };
  });
}

// --- mbr --------------------------------------------------------------------

void add_mbr_commands(CLI::App& app, Context& ctx) {
  auto* group = app.add_subcommand("mbr", "Minimum Bayes risk decoding");
  group->require_subcommand(1);

  struct Opts {
    std::string nbest, samples, utility = "chrf", matrix;
    bool dump = false;
  };

  auto prepare = [](const Opts& o, std::vector<NBestList>& lists,
                    std::vector<std::vector<std::string>>& samples, mbr::UtilityKind& kind,
                    std::vector<Eigen::MatrixXd>& matrices) {
    lists = io::read_nbest(o.nbest);
    kind = mbr::parse_utility_kind(o.utility);
    std::map<SegmentId, std::vector<std::string>> by_segment;
    if (!o.samples.empty())
      for (const auto& l : io::read_nbest(o.samples))
        for (const auto& h : l.hypotheses) by_segment[l.segment_id].push_back(h.text);
    for (const auto& l : lists) {
      std::vector<std::string> s;
      if (o.samples.empty()) {
        for (const auto& h : l.hypotheses) s.push_back(h.text);
      } else {
        s = by_segment[l.segment_id];
        if (s.empty()) throw DataError(o.samples + ": no samples for segment " + std::to_string(l.segment_id));
      }
      samples.push_back(std::move(s));
    }
    if (kind == mbr::UtilityKind::external_matrix) matrices = load_matrices(o.matrix, lists.size());
  };

  auto add_common = [](CLI::App* sub, Opts& o) {
    sub->add_option("--nbest", o.nbest, "Candidate n-best file")->required();
    sub->add_option("--samples", o.samples, "Pseudo-reference n-best file (default: the candidates)");
    sub->add_option("--utility", o.utility, "chrf, bleu-sentence or external-matrix")->capture_default_str();
    sub->add_option("--matrix", o.matrix, "Utility matrices (rows = candidates), one block per segment");
  };

  auto d = std::make_shared<Opts>();
  auto* decode = group->add_subcommand("decode", "Pick the candidate with the highest expected utility");
  add_common(decode, *d);
  decode->add_flag("--dump-utilities", d->dump,
                   "Print segment, rank, expected utility, best flag and text as TSV instead");
  decode->callback([d, &ctx, prepare] {
    ctx.action = [d, &ctx, prepare] {
      std::vector<NBestList> lists;
      std::vector<std::vector<std::string>> samples;
      mbr::UtilityKind kind;
      std::vector<Eigen::MatrixXd> matrices;
      prepare(*d, lists, samples, kind, matrices);
      std::vector<mbr::MbrResult> results(lists.size());
      parallel_for(lists.size(), ctx.threads, [&](std::size_t i) {
        results[i] = mbr::mbr_decode(lists[i], {lists[i].segment_id, samples[i]},
                                     utility_for(kind, matrices, i), 1);
      });
      auto& out = *ctx.out;
      for (std::size_t i = 0; i < lists.size(); ++i) {
        if (!d->dump) {
          out << results[i].best.text << '\n';
          continue;
        }
        for (std::size_t c = 0; c < lists[i].size(); ++c)
          out << lists[i].segment_id << '\t' << c << '\t'
              << format_number(results[i].expected_utilities[static_cast<Eigen::Index>(c)]) << '\t'
              << (c == results[i].best_index ? 1 : 0) << '\t' << lists[i].hypotheses[c].text << '\n';
      }
    };
  });

  auto m = std::make_shared<Opts>();
  auto* matrix = group->add_subcommand("matrix", "Write candidate-by-sample utility matrices");
  add_common(matrix, *m);
  matrix->callback([m, &ctx, prepare] {
    ctx.action = [m, &ctx, prepare] {
      std::vector<NBestList> lists;
      std::vector<std::vector<std::string>> samples;
      mbr::UtilityKind kind;
      std::vector<Eigen::MatrixXd> matrices;
      prepare(*m, lists, samples, kind, matrices);
      for (std::size_t i = 0; i < lists.size(); ++i) {
        std::vector<std::string> cands;
        for (const auto& h : lists[i].hypotheses) cands.push_back(h.text);
        mbr::write_utility_matrix(*ctx.out,
                                  mbr::utility_matrix(cands, samples[i], utility_for(kind, matrices, i), ctx.threads));
      }
    };
  });
}

// --- pipeline ---------------------------------------------------------------

void add_pipeline_commands(CLI::App& app, Context& ctx) {
  auto* group = app.add_subcommand("pipeline", "End-to-end decoding pipelines");
  group->require_subcommand(1);

  struct Opts {
    std::string ensemble, doc, doc_chunks, weights, utility = "chrf", matrix;
    std::vector<std::string> ensemble_columns, doc_columns;
    std::size_t k = 50;
    bool dedupe = false;
  };
  auto o = std::make_shared<Opts>();
  auto* qad = group->add_subcommand(
      "qad", "Merge ensemble and document n-best lists, prune with a tuned reranker, then MBR");
  qad->add_option("--ensemble", o->ensemble, "Sentence-level ensemble n-best file")->required();
  qad->add_option("--doc", o->doc, "Document-model n-best file");
  qad->add_option("--doc-chunks", o->doc_chunks,
                  "Chunk ranges ('begin end' per line) when --doc holds <SEP>-joined hypotheses");
  qad->add_option("--weights", o->weights, "Reranker weights")->required();
  qad->add_option("--ensemble-column", o->ensemble_columns, "Feature column name=FILE for the ensemble list");
  qad->add_option("--doc-column", o->doc_columns, "Feature column name=FILE for the document list");
  qad->add_option("--k", o->k, "Hypotheses kept after pruning")->capture_default_str()->check(CLI::PositiveNumber);
  qad->add_option("--utility", o->utility, "chrf, bleu-sentence or external-matrix")->capture_default_str();
  qad->add_option("--matrix", o->matrix,
                  "External utilities over each merged list, one block per segment in id order");
  qad->add_flag("--dedupe", o->dedupe, "Drop duplicate texts when merging");
  qad->callback([o, &ctx] {
    ctx.action = [o, &ctx] {
      auto ens = io::read_nbest(o->ensemble, Origin::ensemble);
      attach_columns(ens, o->ensemble_columns);
      std::vector<NBestList> doc;
      if (!o->doc.empty()) {
        doc = io::read_nbest(o->doc, Origin::document);
        attach_columns(doc, o->doc_columns);
        if (!o->doc_chunks.empty()) {
          const auto chunks = io::read_document_ranges(o->doc_chunks);
          auto split = datapipe::split_doc_nbest(doc, chunks);
          *ctx.err << "doc_hypotheses=" << split.report.hypotheses << " kept=" << split.report.kept
                   << " discarded=" << split.report.discarded << '\n';
          doc = std::move(split.lists);
        }
        for (auto& l : doc)
          for (auto& h : l.hypotheses) h.origin = Origin::document;
      }
      const auto weights = io::read_weights(o->weights);
      const auto kind = mbr::parse_utility_kind(o->utility);

      std::map<SegmentId, std::pair<NBestList, NBestList>> segments;
      for (auto& l : ens) segments[l.segment_id].first = std::move(l);
      for (auto& l : doc)
        if (!l.empty() || segments.count(l.segment_id)) segments[l.segment_id].second = std::move(l);
      std::vector<SegmentId> ids;
      for (auto& [id, pair] : segments) {
        pair.first.segment_id = id;
        pair.second.segment_id = id;
        ids.push_back(id);
      }
      std::vector<Eigen::MatrixXd> matrices;
      if (kind == mbr::UtilityKind::external_matrix) matrices = load_matrices(o->matrix, ids.size());

      std::vector<std::string> best(ids.size());
      parallel_for(ids.size(), ctx.threads, [&](std::size_t i) {
        const auto& [e, d] = segments.at(ids[i]);
        const auto r = mbr::two_stage_decode(e, d, weights, utility_for(kind, matrices, i),
                                             {o->k, o->dedupe, 1});
        best[i] = r.best.text;
      });
      for (const auto& line : best) *ctx.out << line << '\n';
    };
  });
}

}  // namespace qad::cli
