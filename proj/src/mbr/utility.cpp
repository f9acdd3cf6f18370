#include "qad/mbr/utility.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "qad/core/error.hpp"
#include "qad/core/nbest.hpp"
#include "qad/metrics/metric.hpp"
#include "qad/util/parallel.hpp"

namespace qad::mbr {

UtilityKind parse_utility_kind(std::string_view name) {
  if (name == "chrf") return UtilityKind::chrf;
  if (name == "bleu-sentence") return UtilityKind::bleu_sentence;
  if (name == "external-matrix" || name == "external") return UtilityKind::external_matrix;
  throw DataError("unknown utility '" + std::string(name) +
                  "' (expected chrf, bleu-sentence or external-matrix)");
}

std::string_view utility_name(UtilityKind kind) {
  switch (kind) {
    case UtilityKind::chrf: return "chrf";
    case UtilityKind::bleu_sentence: return "bleu-sentence";
    case UtilityKind::external_matrix: break;
  }
  return "external-matrix";
}

double utility(UtilityKind kind, std::string_view reference, std::string_view hypothesis) {
  switch (kind) {
    case UtilityKind::chrf: return metrics::sentence_chrf(hypothesis, reference);
    case UtilityKind::bleu_sentence: return metrics::sentence_bleu(hypothesis, reference);
    case UtilityKind::external_matrix: break;
  }
  throw DataError("external utilities are only available as a matrix");
}

namespace {

// Maps each input string to the index of its first occurrence among distinct strings.
struct Interned {
  std::vector<std::string_view> distinct;
  std::vector<std::size_t> index;
};

Interned intern(std::span<const std::string> a, std::span<const std::string> b,
                std::vector<std::size_t>& b_index) {
  Interned out;
  std::unordered_map<std::string_view, std::size_t> seen;
  const auto add = [&](const std::string& s) {
    auto [it, inserted] = seen.try_emplace(s, out.distinct.size());
    if (inserted) out.distinct.push_back(s);
    return it->second;
  };
  for (const auto& s : a) out.index.push_back(add(s));
  for (const auto& s : b) b_index.push_back(add(s));
  return out;
}

}  // namespace

Eigen::MatrixXd utility_matrix(std::span<const std::string> candidates,
                               std::span<const std::string> samples, const UtilityFunction& u,
                               std::size_t threads) {
  if (candidates.empty() || samples.empty())
    throw DataError("utility matrix needs non-empty candidates and samples");
  const auto rows = static_cast<Eigen::Index>(candidates.size());
  const auto cols = static_cast<Eigen::Index>(samples.size());
  if (u.kind == UtilityKind::external_matrix) {
    if (u.external.rows() != rows || u.external.cols() != cols)
      throw DataError("external utility matrix is " + std::to_string(u.external.rows()) + "x" +
                      std::to_string(u.external.cols()) + ", expected " + std::to_string(rows) +
                      "x" + std::to_string(cols));
    return u.external;
  }

  std::vector<std::size_t> sample_index;
  const auto interned = intern(candidates, samples, sample_index);
  Eigen::MatrixXd m(rows, cols);
  if (u.kind == UtilityKind::chrf) {
    std::vector<metrics::CharNgramProfile> profiles(interned.distinct.size());
    parallel_for(profiles.size(), threads,
                 [&](std::size_t k) { profiles[k] = metrics::chrf_profile(interned.distinct[k]); });
    parallel_for(candidates.size(), threads, [&](std::size_t i) {
      const auto& hyp = profiles[interned.index[i]];
      for (Eigen::Index j = 0; j < cols; ++j)
        m(static_cast<Eigen::Index>(i), j) = metrics::chrf_from_stats(
            metrics::chrf_stats(hyp, profiles[sample_index[static_cast<std::size_t>(j)]]));
    });
  } else {
    parallel_for(candidates.size(), threads, [&](std::size_t i) {
      for (Eigen::Index j = 0; j < cols; ++j)
        m(static_cast<Eigen::Index>(i), j) =
            utility(u.kind, samples[static_cast<std::size_t>(j)], candidates[i]);
    });
  }
  return m;
}

std::vector<Eigen::MatrixXd> parse_utility_matrices(std::istream& in) {
  std::vector<Eigen::MatrixXd> out;
  std::string token;
  const auto next_number = [&](const char* what) {
    if (!(in >> token))
      throw DataError(std::string("utility matrix file ended while reading ") + what);
    return parse_number(token);
  };
  while (in >> token) {
    const double r = parse_number(token);
    const double c = next_number("the column count");
    if (r < 1 || c < 1 || r != static_cast<Eigen::Index>(r) || c != static_cast<Eigen::Index>(c))
      throw DataError("bad utility matrix header '" + token + "'");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = next_number("matrix values");
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Eigen::MatrixXd> read_utility_matrices(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  try {
    return parse_utility_matrices(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_utility_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << format_number(m(i, j));
    out << '\n';
  }
}

}  // namespace qad::mbr
