#pragma once

#include <CLI11.hpp>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qad/core/types.hpp"

namespace qad::cli {

struct Context {
  std::size_t threads = 1;
  std::uint64_t seed = 0;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  /// Set by the selected subcommand, run after parsing succeeds.
  std::function<void()> action;
};

void add_metrics_commands(CLI::App& app, Context& ctx);
void add_rerank_commands(CLI::App& app, Context& ctx);
void add_mbr_commands(CLI::App& app, Context& ctx);
void add_pipeline_commands(CLI::App& app, Context& ctx);
void add_factors_commands(CLI::App& app, Context& ctx);
void add_docdata_commands(CLI::App& app, Context& ctx);
void add_filter_commands(CLI::App& app, Context& ctx);
void add_postprocess_commands(CLI::App& app, Context& ctx);
void add_tm_commands(CLI::App& app, Context& ctx);

// Shared helpers.

/// Corpus from --corpus TSV or from --src/--tgt, with optional --docs ranges.
ParallelCorpus load_corpus(const std::string& tsv, const std::string& src, const std::string& tgt,
                           const std::string& docs);

/// Attaches "name=FILE" score columns as hypothesis features.
void attach_columns(std::vector<NBestList>& lists, const std::vector<std::string>& specs);

std::string fixed2(double value);

}  // namespace qad::cli
