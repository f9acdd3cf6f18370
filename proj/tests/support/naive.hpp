#pragma once

// Deliberately simple reference implementations used as test oracles.

#include <cstddef>
#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "qad/tm/index.hpp"

namespace qad::oracle {

inline std::u32string naive_decode(const std::string& s) {
  std::u32string out;
  for (std::size_t i = 0; i < s.size();) {
    auto c = static_cast<unsigned char>(s[i]);
    int len = c < 0x80 ? 1 : c < 0xE0 ? 2 : c < 0xF0 ? 3 : 4;
    char32_t cp = len == 1 ? c : len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
    for (int k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline double naive_chrf(const std::string& hyp, const std::string& ref) {
  auto strip = [](const std::u32string& s) {
    std::u32string out;
    for (char32_t c : s)
      if (c != U' ' && c != U'\t' && c != U'\n') out.push_back(c);
    return out;
  };
  const auto h = strip(naive_decode(hyp));
  const auto r = strip(naive_decode(ref));
  double prec_sum = 0.0, rec_sum = 0.0;
  int orders = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    std::map<std::u32string, int> hc, rc;
    for (std::size_t i = 0; i + n <= h.size(); ++i) hc[h.substr(i, n)]++;
    for (std::size_t i = 0; i + n <= r.size(); ++i) rc[r.substr(i, n)]++;
    double total_h = 0, total_r = 0, match = 0;
    for (auto& [g, c] : hc) {
      total_h += c;
      auto it = rc.find(g);
      if (it != rc.end()) match += std::min(c, it->second);
    }
    for (auto& [g, c] : rc) total_r += c;
    if (total_h > 0 && total_r > 0) {
      prec_sum += match / total_h;
      rec_sum += match / total_r;
      ++orders;
    }
  }
  if (orders == 0) return 0.0;
  const double p = prec_sum / orders, rr = rec_sum / orders;
  if (p + rr == 0.0) return 0.0;
  double f = (1 + 4.0) * p * rr;
  f /= (4.0 * p) + rr;
  return 100 * f;
}

/// Utility u(reference, hypothesis) backed by naive_chrf.
inline double naive_chrf_utility(const std::string& reference, const std::string& hypothesis) {
  return naive_chrf(hypothesis, reference);
}

/// Full-matrix token edit distance.
inline std::size_t naive_levenshtein(const std::vector<std::string>& a,
                                     const std::vector<std::string>& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      d[i][j] = std::min(sub, std::min(d[i - 1][j], d[i][j - 1]) + 1);
    }
  return d[a.size()][b.size()];
}

struct NaiveMbr {
  std::size_t best = 0;
  std::vector<double> expected;
};

/// u(sample, candidate) averaged over samples. Means within 1e-9 of the
/// largest |u| of the maximum count as tied; the first tied candidate wins.
template <class Utility>
NaiveMbr naive_mbr(const std::vector<std::string>& candidates,
                   const std::vector<std::string>& samples, Utility u) {
  NaiveMbr r;
  double largest = 0.0;
  for (const auto& c : candidates) {
    double sum = 0.0;
    for (const auto& s : samples) {
      const double v = u(s, c);
      sum += v;
      largest = std::max(largest, v < 0 ? -v : v);
    }
    r.expected.push_back(sum / static_cast<double>(samples.size()));
  }
  double top = r.expected[0];
  for (double e : r.expected) top = std::max(top, e);
  while (r.expected[r.best] < top - 1e-9 * largest) ++r.best;
  return r;
}

/// Full scan of the corpus with the naive edit distance.
inline std::vector<tm::Match> naive_tm_query(const ParallelCorpus& corpus, const std::string& query,
                               std::size_t k, double threshold) {
  const auto q = tm::tm_tokens(query);
  std::vector<tm::Match> all;
  for (std::size_t id = 0; id < corpus.size(); ++id) {
    const auto t = tm::tm_tokens(corpus.pairs[id].source);
    const std::size_t longer = std::max(q.size(), t.size());
    const double s = 1.0 - static_cast<double>(oracle::naive_levenshtein(q, t)) /
                               static_cast<double>(longer);
    if (s > 0.0 && s >= threshold)
      all.push_back({id, corpus.pairs[id].source, corpus.pairs[id].target, s});
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const tm::Match& a, const tm::Match& b) { return a.similarity > b.similarity; });
  if (all.size() > k) all.resize(k);
  return all;
}

}  // namespace qad::oracle
