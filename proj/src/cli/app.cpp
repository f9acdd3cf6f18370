#include <ostream>

#include "commands.hpp"
#include "qad/cli/dispatch.hpp"
#include "qad/core/error.hpp"
#include "qad/core/io.hpp"
#include "qad/rerank/rescore.hpp"
#include "qad/util/parallel.hpp"

namespace qad::cli {

ParallelCorpus load_corpus(const std::string& tsv, const std::string& src, const std::string& tgt,
                           const std::string& docs) {
  ParallelCorpus corpus;
  if (!tsv.empty()) {
    if (!src.empty() || !tgt.empty()) throw CLI::ValidationError("use either --corpus or --src/--tgt");
    corpus = io::read_tsv_corpus(tsv);
  } else if (!src.empty() && !tgt.empty()) {
    corpus = io::read_corpus(src, tgt);
  } else {
    throw CLI::ValidationError("a corpus is required: --corpus FILE or --src FILE --tgt FILE");
  }
  if (!docs.empty()) corpus.documents = io::read_document_ranges(docs);
  validate(corpus);
  return corpus;
}

void attach_columns(std::vector<NBestList>& lists, const std::vector<std::string>& specs) {
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
      throw CLI::ValidationError("--column expects name=FILE, got '" + spec + "'");
    const auto values = io::read_reals(spec.substr(eq + 1));
    rerank::attach_score_column(lists, spec.substr(0, eq), values);
  }
}

std::string fixed2(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quality-aware MT decoding toolkit: metrics, reranking, MBR and data tools.", "qad"};
  app.require_subcommand(1);
  app.fallthrough();
  app.failure_message(CLI::FailureMessage::help);
  Context ctx;
  ctx.threads = default_threads();
  ctx.out = &out;
  ctx.err = &err;
  app.add_option("--threads", ctx.threads, "Worker threads (default: available cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", ctx.seed, "Seed for all randomness")->capture_default_str();

  add_metrics_commands(app, ctx);
  add_rerank_commands(app, ctx);
  add_mbr_commands(app, ctx);
  add_pipeline_commands(app, ctx);
  add_factors_commands(app, ctx);
  add_docdata_commands(app, ctx);
  add_filter_commands(app, ctx);
  add_postprocess_commands(app, ctx);
  add_tm_commands(app, ctx);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }
  try {
    if (ctx.action) ctx.action();
    return kExitOk;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace qad::cli
