#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "kwe/eval.hpp"
#include "kwe/matrix.hpp"

namespace kwe {

// Paired per-query scores: one row per query, one column per system.
struct ScoreMatrix {
  std::vector<std::string> systems;
  std::vector<std::string> queries;
  Matrix<double> values;

  std::size_t system_count() const { return systems.size(); }
  std::size_t query_count() const { return queries.size(); }
};

// Two-sided paired permutation test on mean difference, null generated by
// per-query sign flips, add-one smoothing: p = (hits + 1) / (n_perm + 1).
// Each draw is seeded independently (counter-based), so any execution order
// gives the same p-value.
double permutation_test(std::span<const double> a, std::span<const double> b,
                        std::uint64_t n_perm, std::uint64_t seed);

struct PairwiseResult {
  std::size_t system_a = 0;
  std::size_t system_b = 0;
  double observed_diff = 0.0;  // mean(a) - mean(b)
  double p_value = 1.0;
};

// Randomized Tukey HSD for paired designs: the null distribution is the max
// pairwise mean difference under per-query permutation of system labels,
// which controls the family-wise error across all pairs.
std::vector<PairwiseResult> randomized_tukey_hsd(const ScoreMatrix& matrix,
                                                 std::uint64_t n_perm,
                                                 std::uint64_t seed);

// Joins per-query reports into a paired matrix; every report must cover the
// same query ids. Rows are sorted by query id.
ScoreMatrix score_matrix_from_reports(std::span<const EvalReport> reports,
                                      std::span<const std::string> names);

// Human-readable comparison: per-system means, then for every pair the
// observed difference, pairwise permutation p, Tukey HSD p, and a
// significance marker at level alpha.
void write_significance_report(const ScoreMatrix& matrix,
                               std::uint64_t n_perm, std::uint64_t seed,
                               double alpha, std::ostream& out);

}  // namespace kwe
