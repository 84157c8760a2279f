#include "kwe/stats.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "kwe/error.hpp"
#include "kwe/rng.hpp"
#include "oracles.hpp"

using namespace kwe;

namespace {

EvalReport report_of(std::vector<std::pair<std::string, double>> per_query) {
  EvalReport r;
  r.task = "map20";
  r.mode = "test_items";
  r.per_query = std::move(per_query);
  double sum = 0.0;
  for (const auto& [id, score] : r.per_query) sum += score;
  r.aggregate = sum / static_cast<double>(r.per_query.size());
  return r;
}

ScoreMatrix matrix_of(std::vector<std::string> systems,
                      const std::vector<std::vector<double>>& columns) {
  ScoreMatrix m;
  m.systems = std::move(systems);
  const std::size_t q = columns[0].size();
  for (std::size_t i = 0; i < q; ++i)
    m.queries.push_back("q" + std::to_string(i));
  m.values = Matrix<double>(q, columns.size());
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t s = 0; s < columns.size(); ++s)
      m.values.row(i)[s] = columns[s][i];
  return m;
}

}  // namespace

TEST_CASE("identical systems give p exactly 1.0") {
  const std::vector<double> scores = {0.3, 0.7, 0.55, 0.2, 0.9};
  CHECK(permutation_test(scores, scores, 500, 7) == 1.0);

  const ScoreMatrix m = matrix_of({"s1", "s2", "s3"},
                                  {{0.1, 0.5, 0.9}, {0.1, 0.5, 0.9},
                                   {0.1, 0.5, 0.9}});
  for (const auto& pair : randomized_tukey_hsd(m, 500, 7)) {
    CHECK(pair.observed_diff == 0.0);
    CHECK(pair.p_value == 1.0);
  }
}

TEST_CASE("permutation test tracks exhaustive sign-flip enumeration") {
  Rng rng(83);
  for (int round = 0; round < 8; ++round) {
    const std::size_t n = 6 + rng.below(7);  // 6..12 queries
    std::vector<double> a(n), b(n);
    // Rounds alternate between near-null and clearly separated systems.
    const double gap = (round % 2 == 0) ? 0.02 : 0.25;
    for (std::size_t i = 0; i < n; ++i) {
      b[i] = rng.unit();
      a[i] = b[i] + gap + 0.1 * (rng.unit() - 0.5);
    }
    const double exact = oracle::exhaustive_sign_flip_p(a, b);
    const double sampled = permutation_test(a, b, 200000, 1234 + round);
    CHECK(std::abs(sampled - exact) <= 0.005);
  }
}

TEST_CASE("permutation test is symmetric, deterministic and guarded") {
  const std::vector<double> a = {0.9, 0.8, 0.75, 0.6, 0.95};
  const std::vector<double> b = {0.5, 0.7, 0.4, 0.65, 0.55};
  const double p = permutation_test(a, b, 4000, 11);
  CHECK(permutation_test(b, a, 4000, 11) == p);
  CHECK(permutation_test(a, b, 4000, 11) == p);
  CHECK(p > 0.0);
  CHECK(p <= 1.0);

  const std::vector<double> shorter = {0.1};
  CHECK_THROWS_AS((void)permutation_test(a, shorter, 100, 1), UsageError);
  CHECK_THROWS_AS((void)permutation_test({}, {}, 100, 1), UsageError);
  CHECK_THROWS_AS((void)permutation_test(a, b, 0, 1), UsageError);
}

TEST_CASE("randomized Tukey HSD tracks exhaustive label permutation") {
  // 3 systems x 8 queries: s0 clearly ahead, s1 and s2 close together.
  const std::vector<std::vector<double>> columns = {
      {0.9, 0.85, 0.95, 0.8, 0.9, 0.88, 0.92, 0.86},
      {0.55, 0.6, 0.5, 0.65, 0.58, 0.52, 0.61, 0.57},
      {0.5, 0.62, 0.48, 0.6, 0.55, 0.5, 0.63, 0.54}};
  const ScoreMatrix m = matrix_of({"s0", "s1", "s2"}, columns);

  const auto got = randomized_tukey_hsd(m, 200000, 99);
  const auto exact = oracle::exhaustive_tukey(columns);
  REQUIRE(got.size() == 3);
  for (const auto& pair : got) {
    const double want = exact.p[pair.system_a][pair.system_b];
    CHECK(std::abs(pair.p_value - want) <= 0.01);
    const double diff = oracle::mean(columns[pair.system_a]) -
                        oracle::mean(columns[pair.system_b]);
    CHECK(pair.observed_diff == doctest::Approx(diff).epsilon(1e-12));
  }
  // The family-wise null makes the strong pairs significant and the weak
  // pair not, in both computations.
  CHECK(got[0].p_value < 0.05);   // s0 vs s1
  CHECK(got[1].p_value < 0.05);   // s0 vs s2
  CHECK(got[2].p_value > 0.05);   // s1 vs s2
}

TEST_CASE("two-system Tukey agrees with the sign-flip null") {
  // With two systems, per-query label permutation is exactly a sign flip of
  // the difference, so the Tukey p matches the exhaustive sign-flip p.
  const std::vector<std::vector<double>> columns = {
      {0.8, 0.7, 0.9, 0.6, 0.75, 0.85, 0.65, 0.7},
      {0.6, 0.72, 0.5, 0.58, 0.6, 0.7, 0.6, 0.66}};
  const ScoreMatrix m = matrix_of({"a", "b"}, columns);
  const auto got = randomized_tukey_hsd(m, 200000, 5);
  const double exact = oracle::exhaustive_sign_flip_p(columns[0], columns[1]);
  REQUIRE(got.size() == 1);
  CHECK(std::abs(got[0].p_value - exact) <= 0.01);
}

TEST_CASE("Tukey HSD input validation") {
  const ScoreMatrix one = matrix_of({"only"}, {{0.5, 0.6}});
  CHECK_THROWS_AS((void)randomized_tukey_hsd(one, 100, 1), UsageError);
  ScoreMatrix twisted = matrix_of({"a", "b"}, {{0.5, 0.6}, {0.4, 0.7}});
  twisted.values = Matrix<double>(1, 3);
  CHECK_THROWS_AS((void)randomized_tukey_hsd(twisted, 100, 1), UsageError);
  const ScoreMatrix fine = matrix_of({"a", "b"}, {{0.5, 0.6}, {0.4, 0.7}});
  CHECK_THROWS_AS((void)randomized_tukey_hsd(fine, 0, 1), UsageError);
}

TEST_CASE("score matrix pairs reports by query id") {
  const EvalReport r1 = report_of({{"q2", 0.2}, {"q1", 0.1}, {"q3", 0.3}});
  const EvalReport r2 = report_of({{"q1", 0.9}, {"q3", 0.7}, {"q2", 0.8}});
  const std::vector<EvalReport> reports = {r1, r2};
  const std::vector<std::string> names = {"base", "contrast"};
  const ScoreMatrix m = score_matrix_from_reports(reports, names);

  CHECK(m.systems == names);
  CHECK(m.queries == std::vector<std::string>{"q1", "q2", "q3"});
  CHECK(m.values.row(0)[0] == 0.1);
  CHECK(m.values.row(0)[1] == 0.9);
  CHECK(m.values.row(1)[0] == 0.2);
  CHECK(m.values.row(1)[1] == 0.8);
  CHECK(m.values.row(2)[0] == 0.3);
  CHECK(m.values.row(2)[1] == 0.7);
}

TEST_CASE("score matrix rejects unpairable reports") {
  const std::vector<std::string> names = {"base", "contrast"};
  SUBCASE("not enough reports") {
    const std::vector<EvalReport> one = {report_of({{"q1", 0.1}})};
    const std::vector<std::string> single = {"base"};
    CHECK_THROWS_AS((void)score_matrix_from_reports(one, single), UsageError);
  }
  SUBCASE("name count mismatch") {
    const std::vector<EvalReport> two = {report_of({{"q1", 0.1}}),
                                         report_of({{"q1", 0.2}})};
    const std::vector<std::string> three = {"a", "b", "c"};
    CHECK_THROWS_AS((void)score_matrix_from_reports(two, three), UsageError);
  }
  SUBCASE("duplicate query id") {
    const std::vector<EvalReport> dup = {
        report_of({{"q1", 0.1}, {"q1", 0.3}}),
        report_of({{"q1", 0.2}, {"q2", 0.4}})};
    CHECK_THROWS_WITH_AS((void)score_matrix_from_reports(dup, names),
                         doctest::Contains("duplicate query id"), DataError);
  }
  SUBCASE("different query counts") {
    const std::vector<EvalReport> sizes = {
        report_of({{"q1", 0.1}}),
        report_of({{"q1", 0.2}, {"q2", 0.4}})};
    CHECK_THROWS_WITH_AS((void)score_matrix_from_reports(sizes, names),
                         doctest::Contains("different query counts"),
                         DataError);
  }
  SUBCASE("different query ids") {
    const std::vector<EvalReport> sets = {
        report_of({{"q1", 0.1}, {"q2", 0.3}}),
        report_of({{"q1", 0.2}, {"q9", 0.4}})};
    CHECK_THROWS_WITH_AS((void)score_matrix_from_reports(sets, names),
                         doctest::Contains("query sets differ"), DataError);
  }
}

TEST_CASE("significance report lists means and pairwise verdicts") {
  const ScoreMatrix m = matrix_of(
      {"fast", "plain"},
      {{0.9, 0.8, 0.95, 0.9, 0.85, 0.9, 0.92, 0.88, 0.91, 0.9, 0.89, 0.93},
       {0.4, 0.5, 0.45, 0.35, 0.5, 0.42, 0.48, 0.44, 0.41, 0.5, 0.46, 0.43}});
  std::ostringstream out;
  write_significance_report(m, 5000, 3, 0.05, out);
  const std::string text = out.str();
  CHECK(text.find("queries: 12") != std::string::npos);
  CHECK(text.find("system means:") != std::string::npos);
  CHECK(text.find("fast") != std::string::npos);
  CHECK(text.find("0.894167") != std::string::npos);  // mean of system fast
  CHECK(text.find("fast vs plain") != std::string::npos);
  CHECK(text.find("p_perm") != std::string::npos);
  CHECK(text.find("p_tukey") != std::string::npos);
  CHECK(text.find("\t*") != std::string::npos);  // significant at 0.05

  const ScoreMatrix same = matrix_of({"a", "b"}, {{0.5, 0.6}, {0.5, 0.6}});
  std::ostringstream out2;
  write_significance_report(same, 200, 3, 0.05, out2);
  CHECK(out2.str().find("*") == std::string::npos);
}
