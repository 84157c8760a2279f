#include "kwe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "kwe/error.hpp"
#include "kwe/rng.hpp"

namespace kwe {

namespace {

// Slack when comparing permuted statistics against the observed one, so
// exact ties (identical systems) count as hits.
constexpr double kTieEps = 1e-12;

}  // namespace

double permutation_test(std::span<const double> a, std::span<const double> b,
                        std::uint64_t n_perm, std::uint64_t seed) {
  if (a.size() != b.size())
    throw UsageError("permutation_test: score vectors differ in length");
  if (a.empty()) throw UsageError("permutation_test: empty score vectors");
  if (n_perm < 1) throw UsageError("permutation_test: n_perm must be >= 1");

  const std::size_t n = a.size();
  std::vector<double> diff(n);
  double observed = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diff[i] = a[i] - b[i];
    observed += diff[i];
  }
  observed = std::abs(observed) / static_cast<double>(n);

  std::uint64_t hits = 0;
  for (std::uint64_t draw = 0; draw < n_perm; ++draw) {
    Rng rng(derive_seed(seed, kSaltPermDraw, draw));
    double sum = 0.0;
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 64 == 0) bits = rng.next_u64();
      const bool flip = (bits >> (i % 64)) & 1u;
      sum += flip ? -diff[i] : diff[i];
    }
    const double stat = std::abs(sum) / static_cast<double>(n);
    if (stat >= observed - kTieEps) ++hits;
  }
  return static_cast<double>(hits + 1) / static_cast<double>(n_perm + 1);
}

std::vector<PairwiseResult> randomized_tukey_hsd(const ScoreMatrix& matrix,
                                                 std::uint64_t n_perm,
                                                 std::uint64_t seed) {
  const std::size_t m = matrix.system_count();
  const std::size_t q = matrix.query_count();
  if (m < 2) throw UsageError("tukey_hsd: need at least 2 systems");
  if (q < 1) throw UsageError("tukey_hsd: need at least 1 query");
  if (n_perm < 1) throw UsageError("tukey_hsd: n_perm must be >= 1");
  if (matrix.values.rows() != q || matrix.values.cols() != m)
    throw UsageError("tukey_hsd: matrix shape mismatch");

  std::vector<double> means(m, 0.0);
  for (std::size_t i = 0; i < q; ++i) {
    const auto row = matrix.values.row(i);
    for (std::size_t s = 0; s < m; ++s) means[s] += row[s];
  }
  for (auto& v : means) v /= static_cast<double>(q);

  std::vector<PairwiseResult> results;
  for (std::size_t sa = 0; sa < m; ++sa)
    for (std::size_t sb = sa + 1; sb < m; ++sb)
      results.push_back({sa, sb, means[sa] - means[sb], 0.0});

  std::vector<std::uint64_t> hits(results.size(), 0);
  std::vector<double> sums(m);
  std::vector<double> row_buf(m);
  for (std::uint64_t draw = 0; draw < n_perm; ++draw) {
    Rng rng(derive_seed(seed, kSaltTukeyDraw, draw));
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t i = 0; i < q; ++i) {
      const auto row = matrix.values.row(i);
      std::copy(row.begin(), row.end(), row_buf.begin());
      for (std::size_t s = m; s > 1; --s)
        std::swap(row_buf[s - 1], row_buf[rng.below(s)]);
      for (std::size_t s = 0; s < m; ++s) sums[s] += row_buf[s];
    }
    const auto [lo, hi] = std::minmax_element(sums.begin(), sums.end());
    const double stat = (*hi - *lo) / static_cast<double>(q);
    for (std::size_t p = 0; p < results.size(); ++p)
      if (stat >= std::abs(results[p].observed_diff) - kTieEps) ++hits[p];
  }
  for (std::size_t p = 0; p < results.size(); ++p)
    results[p].p_value =
        static_cast<double>(hits[p] + 1) / static_cast<double>(n_perm + 1);
  return results;
}

ScoreMatrix score_matrix_from_reports(std::span<const EvalReport> reports,
                                      std::span<const std::string> names) {
  if (reports.size() < 2)
    throw UsageError("score matrix: need at least 2 reports");
  if (names.size() != reports.size())
    throw UsageError("score matrix: one name per report required");

  using Entry = std::pair<std::string, double>;
  std::vector<std::vector<Entry>> sorted(reports.size());
  for (std::size_t r = 0; r < reports.size(); ++r) {
    sorted[r] = reports[r].per_query;
    std::sort(sorted[r].begin(), sorted[r].end());
    for (std::size_t i = 1; i < sorted[r].size(); ++i)
      if (sorted[r][i].first == sorted[r][i - 1].first)
        throw DataError("score matrix: duplicate query id '" +
                        sorted[r][i].first + "' in report " + names[r]);
  }
  for (std::size_t r = 1; r < sorted.size(); ++r) {
    if (sorted[r].size() != sorted[0].size())
      throw DataError("score matrix: reports cover different query counts (" +
                      names[0] + " vs " + names[r] + ")");
    for (std::size_t i = 0; i < sorted[r].size(); ++i)
      if (sorted[r][i].first != sorted[0][i].first)
        throw DataError("score matrix: query sets differ between " + names[0] +
                        " and " + names[r] + " (first mismatch: '" +
                        sorted[0][i].first + "' vs '" + sorted[r][i].first +
                        "')");
  }

  ScoreMatrix matrix;
  matrix.systems.assign(names.begin(), names.end());
  matrix.queries.reserve(sorted[0].size());
  for (const auto& [id, score] : sorted[0]) matrix.queries.push_back(id);
  matrix.values = Matrix<double>(matrix.queries.size(), reports.size());
  for (std::size_t i = 0; i < matrix.queries.size(); ++i) {
    auto row = matrix.values.row(i);
    for (std::size_t r = 0; r < sorted.size(); ++r)
      row[r] = sorted[r][i].second;
  }
  return matrix;
}

void write_significance_report(const ScoreMatrix& matrix, std::uint64_t n_perm,
                               std::uint64_t seed, double alpha,
                               std::ostream& out) {
  const std::size_t m = matrix.system_count();
  const std::size_t q = matrix.query_count();

  std::vector<double> means(m, 0.0);
  for (std::size_t i = 0; i < q; ++i) {
    const auto row = matrix.values.row(i);
    for (std::size_t s = 0; s < m; ++s) means[s] += row[s];
  }
  for (auto& v : means) v /= static_cast<double>(q);

  out << "queries: " << q << "\npermutations: " << n_perm
      << "\nalpha: " << alpha << "\n\nsystem means:\n";
  out << std::fixed << std::setprecision(6);
  for (std::size_t s = 0; s < m; ++s)
    out << "  " << matrix.systems[s] << "\t" << means[s] << "\n";

  const auto tukey = randomized_tukey_hsd(matrix, n_perm, seed);
  out << "\npairwise comparisons (permutation p, Tukey HSD p):\n";
  std::vector<double> a(q), b(q);
  for (const auto& pair : tukey) {
    for (std::size_t i = 0; i < q; ++i) {
      a[i] = matrix.values.row(i)[pair.system_a];
      b[i] = matrix.values.row(i)[pair.system_b];
    }
    const double perm_p = permutation_test(a, b, n_perm, seed);
    out << "  " << matrix.systems[pair.system_a] << " vs "
        << matrix.systems[pair.system_b] << "\tdiff " << std::showpos
        << pair.observed_diff << std::noshowpos << "\tp_perm " << perm_p
        << "\tp_tukey " << pair.p_value
        << (pair.p_value < alpha ? "\t*" : "") << "\n";
  }
}

}  // namespace kwe
