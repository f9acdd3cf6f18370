#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qad::mbr {

enum class UtilityKind { chrf, bleu_sentence, external_matrix };

/// u(reference, hypothesis). Built-ins are sentence-level chrF and BLEU;
/// external_matrix serves a precomputed candidates-by-samples matrix.
struct UtilityFunction {
  UtilityKind kind = UtilityKind::chrf;
  Eigen::MatrixXd external;

  static UtilityFunction chrf() { return {UtilityKind::chrf, {}}; }
  static UtilityFunction bleu_sentence() { return {UtilityKind::bleu_sentence, {}}; }
  static UtilityFunction from_matrix(Eigen::MatrixXd m) {
    return {UtilityKind::external_matrix, std::move(m)};
  }
};

/// Accepts "chrf", "bleu-sentence", "external-matrix".
UtilityKind parse_utility_kind(std::string_view name);
std::string_view utility_name(UtilityKind kind);

/// Built-in utility of one pair.
double utility(UtilityKind kind, std::string_view reference, std::string_view hypothesis);

/// Entry (i, j) = u(samples[j], candidates[i]). N-gram profiles are computed
/// once per distinct string. Throws DataError on empty inputs or when an
/// external matrix has the wrong shape.
Eigen::MatrixXd utility_matrix(std::span<const std::string> candidates,
                               std::span<const std::string> samples, const UtilityFunction& u,
                               std::size_t threads = 1);

/// Matrix file: header "rows cols", then rows*cols reals in row-major order.
/// A file may hold several matrices back to back (one per segment).
std::vector<Eigen::MatrixXd> parse_utility_matrices(std::istream& in);
std::vector<Eigen::MatrixXd> read_utility_matrices(const std::filesystem::path& path);
void write_utility_matrix(std::ostream& out, const Eigen::MatrixXd& m);

}  // namespace qad::mbr
