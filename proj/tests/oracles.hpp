#pragma once

// Reference implementations kept deliberately naive and written separately
// from the engine. Tests compare engine output against these; none of them
// call into engine code except to read plain data.

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace oracle {

// 64-bit FNV-1a over bytes, written out long-hand.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    h = h ^ static_cast<std::uint64_t>(b);
    h = h * 1099511628211ull;
  }
  return h;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double softplus(double x) {
  // log(1 + e^x), stable for large |x|
  if (x > 30.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

// Negative-sampling logistic loss from raw scores.
inline double ns_loss(double target_score,
                      std::span<const double> negative_scores) {
  double loss = softplus(-target_score);
  for (double s : negative_scores) loss += softplus(s);
  return loss;
}

inline double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Full ranking of candidate ids by descending score, ties by ascending id.
// `score` maps candidate id -> similarity.
inline std::vector<std::uint32_t> rank_by_score(
    const std::vector<std::pair<std::uint32_t, double>>& scored) {
  std::vector<std::pair<std::uint32_t, double>> rows = scored;
  std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
  std::vector<std::uint32_t> ids;
  ids.reserve(rows.size());
  for (const auto& [id, s] : rows) ids.push_back(id);
  return ids;
}

// AP@cutoff with the min(|relevant|, cutoff) denominator.
inline double average_precision(std::span<const std::uint32_t> ranking,
                                std::span<const std::uint32_t> relevant,
                                std::size_t cutoff) {
  std::vector<std::uint32_t> rel(relevant.begin(), relevant.end());
  std::sort(rel.begin(), rel.end());
  double sum = 0.0;
  std::size_t hits = 0;
  const std::size_t depth = std::min(cutoff, ranking.size());
  for (std::size_t i = 0; i < depth; ++i) {
    if (std::binary_search(rel.begin(), rel.end(), ranking[i])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  const std::size_t denom = std::min(rel.size(), cutoff);
  return denom == 0 ? 0.0 : sum / static_cast<double>(denom);
}

// Reciprocal rank of the single relevant id, zero beyond the cutoff.
inline double reciprocal_rank(std::span<const std::uint32_t> ranking,
                              std::uint32_t relevant, std::size_t cutoff) {
  const std::size_t depth = std::min(cutoff, ranking.size());
  for (std::size_t i = 0; i < depth; ++i)
    if (ranking[i] == relevant)
      return 1.0 / static_cast<double>(i + 1);
  return 0.0;
}

inline double mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

// Exact sign-flip permutation p-value by enumerating all 2^n assignments.
// Two-sided on the absolute mean difference. Returns the tie-inclusive hit
// fraction: the randomized test's (hits+1)/(draws+1) estimator converges to
// this value as draws grow.
inline double exhaustive_sign_flip_p(std::span<const double> a,
                                     std::span<const double> b,
                                     double tie_eps = 1e-12) {
  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  double observed = 0.0;
  for (double x : d) observed += x;
  observed = std::fabs(observed / static_cast<double>(n));

  const std::uint64_t total = 1ull << n;
  std::uint64_t hits = 0;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s += (mask >> i) & 1 ? -d[i] : d[i];
    const double stat = std::fabs(s / static_cast<double>(n));
    if (stat >= observed - tie_eps) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

// Exhaustive randomized-Tukey reference for m systems x n queries: every
// per-query permutation of system labels is enumerated ((m!)^n assignments),
// the null statistic is the spread between the best and worst system mean,
// and each pair is scored against its observed |difference|.
struct TukeyExhaustive {
  // p[i][j] for i < j: tie-inclusive hit fraction, the limit of the
  // randomized test's smoothed estimate.
  std::vector<std::vector<double>> p;
};

inline TukeyExhaustive exhaustive_tukey(
    const std::vector<std::vector<double>>& scores /* [system][query] */,
    double tie_eps = 1e-12) {
  const std::size_t m = scores.size();
  const std::size_t n = scores.empty() ? 0 : scores[0].size();

  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> base(m);
  for (std::size_t i = 0; i < m; ++i) base[i] = i;
  do {
    perms.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));

  std::vector<std::vector<double>> observed(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      observed[i][j] =
          std::fabs(mean(scores[i]) - mean(scores[j]));

  std::vector<std::vector<std::uint64_t>> hits(
      m, std::vector<std::uint64_t>(m, 0));
  std::uint64_t total = 0;

  // Depth-first enumeration over queries, carrying per-system sums.
  std::vector<double> sums(m, 0.0);
  const auto visit = [&](auto&& self, std::size_t q) -> void {
    if (q == n) {
      ++total;
      double lo = sums[0], hi = sums[0];
      for (std::size_t i = 1; i < m; ++i) {
        lo = std::min(lo, sums[i]);
        hi = std::max(hi, sums[i]);
      }
      const double stat = (hi - lo) / static_cast<double>(n);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
          if (stat >= observed[i][j] - tie_eps) ++hits[i][j];
      return;
    }
    for (const auto& perm : perms) {
      for (std::size_t i = 0; i < m; ++i) sums[i] += scores[perm[i]][q];
      self(self, q + 1);
      for (std::size_t i = 0; i < m; ++i) sums[i] -= scores[perm[i]][q];
    }
  };
  visit(visit, 0);

  TukeyExhaustive out;
  out.p.assign(m, std::vector<double>(m, 1.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      out.p[i][j] =
          static_cast<double>(hits[i][j]) / static_cast<double>(total);
  return out;
}

}  // namespace oracle
