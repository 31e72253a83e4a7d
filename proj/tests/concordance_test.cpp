#include "reprank/concordance.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "oracles.hpp"
#include "test_util.hpp"

namespace reprank {
namespace {

using testing::matrix_of;
using testing::ranks_of;

TEST(TieCorrectionTest, Examples) {
  EXPECT_EQ(tie_correction(ranks_of("A>B>C", 3)), 0.0);
  EXPECT_EQ(tie_correction(ranks_of("A=B>C", 3)), 6.0);
  EXPECT_EQ(tie_correction(ranks_of("A=B=C=D=E=F=G", 7)), 336.0);
  EXPECT_EQ(tie_correction(ranks_of("A=B>C=D=E>F", 6)), 6.0 + 24.0);
}

TEST(KendallsWTest, PerfectConcordance) {
  const auto m = matrix_of({"G>F>E>D>C>B>A", "G>F>E>D>C>B>A", "G>F>E>D>C>B>A",
                            "G>F>E>D>C>B>A", "G>F>E>D>C>B>A"},
                           7);
  EXPECT_DOUBLE_EQ(kendalls_w(m), 1.0);
}

TEST(KendallsWTest, OppositeRankingsGiveZero) {
  EXPECT_NEAR(kendalls_w(matrix_of({"A>B>C", "C>B>A"}, 3)), 0.0, 1e-15);
}

TEST(KendallsWTest, HandComputedUntied) {
  // Rank sums 4, 5, 9 against a mean of 6: S = 4 + 1 + 9 = 14.
  const auto m = matrix_of({"A>B>C", "A>B>C", "B>A>C"}, 3);
  EXPECT_NEAR(kendalls_w(m), 14.0 * 12.0 / (9.0 * 24.0), 1e-12);
  EXPECT_NEAR(kendalls_w(m), 0.7777777777777778, 1e-9);
}

TEST(KendallsWTest, HandComputedWithTies) {
  // Rows (1, 2.5, 2.5) and (1, 2, 3): sums 2, 4.5, 5.5; S = 4 + 0.25 + 2.25.
  const auto m = matrix_of({"A>B=C", "A>B>C"}, 3);
  EXPECT_NEAR(kendalls_w(m), 78.0 / 84.0, 1e-12);
  EXPECT_NEAR(kendalls_w(m), 0.9285714285714286, 1e-9);
}

TEST(KendallsWTest, IdenticalTiedRowsAreFullyConcordant) {
  // The tie-corrected denominator makes identical rows concordant even with ties.
  EXPECT_NEAR(kendalls_w(matrix_of({"A>B=C", "A>B=C", "A>B=C"}, 3)), 1.0, 1e-12);
}

TEST(KendallsWTest, Preconditions) {
  EXPECT_THROW(kendalls_w(matrix_of({"A>B>C"}, 3)), std::invalid_argument);
  EXPECT_THROW(kendalls_w(matrix_of({"A", "A"}, 1)), std::invalid_argument);
  EXPECT_THROW(kendalls_w(matrix_of({"A=B=C", "A=B=C"}, 3)), DegenerateMatrixError);
  // One fully tied judge alone does not make the matrix degenerate.
  EXPECT_NO_THROW(kendalls_w(matrix_of({"A=B=C", "A>B>C"}, 3)));
}

std::vector<std::vector<double>> raw_rows(const std::vector<const oracle::OrderedPartition*>& rows,
                                          int n) {
  std::vector<std::vector<double>> out;
  for (const auto* p : rows) out.push_back(oracle::fractional_ranks(*p, n));
  return out;
}

TEST(KendallsWTest, MatchesDefinitionalOracleExhaustively) {
  const auto parts = oracle::ordered_partitions(3);
  std::size_t checked = 0;
  for (std::size_t m : {2u, 3u}) {
    std::vector<std::size_t> idx(m, 0);
    while (true) {
      std::vector<const oracle::OrderedPartition*> chosen;
      std::vector<RankVector> rows;
      for (auto i : idx) {
        chosen.push_back(&parts[i]);
        rows.push_back(ranks_of(parts[i], 3));
      }
      const double expected = oracle::definitional_w(raw_rows(chosen, 3));
      const RankingMatrix matrix("p", rows);
      if (std::isnan(expected)) {
        EXPECT_THROW(kendalls_w(matrix), DegenerateMatrixError);
      } else {
        const double w = kendalls_w(matrix);
        ASSERT_NEAR(w, expected, 1e-12);
        ASSERT_GE(w, 0.0);
        ASSERT_LE(w, 1.0);
        ++checked;
      }
      std::size_t k = 0;
      while (k < m && ++idx[k] == parts.size()) idx[k++] = 0;
      if (k == m) break;
    }
  }
  EXPECT_EQ(checked, 13u * 13u - 1u + 13u * 13u * 13u - 1u);
}

TEST(KendallsWTest, IdenticalMatrixMaximizesOverAllPairs) {
  const auto parts = oracle::ordered_partitions(3);
  double best = 0.0;
  for (const auto& a : parts) {
    for (const auto& b : parts) {
      try {
        const double w = kendalls_w(RankingMatrix("p", {ranks_of(a, 3), ranks_of(b, 3)}));
        best = std::max(best, w);
        if (&a == &b) EXPECT_NEAR(w, 1.0, 1e-12);
      } catch (const DegenerateMatrixError&) {
      }
    }
  }
  EXPECT_NEAR(best, 1.0, 1e-12);
}

TEST(KendallsWTest, ReducesToClassicFormulaWithoutTies) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 6;
    const std::size_t m = 2 + rng() % 5;
    std::vector<RankVector> rows;
    std::vector<std::vector<double>> raw;
    for (std::size_t j = 0; j < m; ++j) {
      std::string letters;
      for (std::size_t i = 0; i < n; ++i) letters += static_cast<char>('A' + i);
      std::shuffle(letters.begin(), letters.end(), rng);
      std::string expr;
      for (std::size_t i = 0; i < n; ++i) {
        if (i) expr += '>';
        expr += letters[i];
      }
      rows.push_back(ranks_of(expr, n));
      raw.push_back(rows.back().values());
    }
    EXPECT_NEAR(kendalls_w(RankingMatrix("p", rows)), oracle::classic_w(raw), 1e-12);
  }
}

TEST(KendallsWTest, InvariantUnderLabelAndRowPermutation) {
  std::mt19937 rng(9);
  const auto parts = oracle::ordered_partitions(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<const oracle::OrderedPartition*> chosen;
    for (int j = 0; j < 4; ++j) chosen.push_back(&parts[rng() % parts.size()]);
    std::vector<RankVector> rows;
    for (const auto* p : chosen) rows.push_back(ranks_of(*p, 4));
    double base;
    try {
      base = kendalls_w(RankingMatrix("p", rows));
    } catch (const DegenerateMatrixError&) {
      continue;
    }

    std::vector<int> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<RankVector> relabeled;
    for (const auto* p : chosen) {
      oracle::OrderedPartition q = *p;
      for (auto& block : q)
        for (int& e : block) e = perm[e];
      relabeled.push_back(ranks_of(q, 4));
    }
    std::shuffle(relabeled.begin(), relabeled.end(), rng);
    EXPECT_NEAR(kendalls_w(RankingMatrix("p", relabeled)), base, 1e-12);
  }
}

TEST(AgreementStatsTest, Examples) {
  const auto identical = matrix_of({"A>B>C", "A>B>C", "A>B>C", "A>B>C", "A>B>C"}, 3);
  EXPECT_EQ(agreement_stats(identical).top_agreement, 5u);
  EXPECT_EQ(agreement_stats(identical).bottom_agreement, 5u);

  const auto mostly = matrix_of({"A>B>C", "A>C>B", "A>B>C", "B>A>C", "A>B>C"}, 3);
  EXPECT_EQ(agreement_stats(mostly).top_agreement, 4u);
  EXPECT_EQ(agreement_stats(mostly).bottom_agreement, 4u);

  const auto tied_top = matrix_of({"A=B>C", "A>B>C"}, 3);
  EXPECT_EQ(agreement_stats(tied_top).top_agreement, 1u);
  EXPECT_EQ(agreement_stats(tied_top).bottom_agreement, 2u);

  const auto all_tied_top = matrix_of({"A=B>C", "A=B>C"}, 3);
  EXPECT_EQ(agreement_stats(all_tied_top).top_agreement, 0u);
}

TEST(AgreementStatsTest, MatchesBruteForceCountOnSmallMatrices) {
  const auto parts = oracle::ordered_partitions(3);
  for (const auto& a : parts) {
    for (const auto& b : parts) {
      for (const auto& c : parts) {
        std::map<int, std::size_t> best;
        std::map<int, std::size_t> worst;
        for (const auto* p : {&a, &b, &c}) {
          if (p->front().size() == 1) ++best[p->front()[0]];
          if (p->back().size() == 1) ++worst[p->back()[0]];
        }
        std::size_t top = 0, bottom = 0;
        for (auto [k, v] : best) top = std::max(top, v);
        for (auto [k, v] : worst) bottom = std::max(bottom, v);
        const auto stats =
            agreement_stats(RankingMatrix("p", {ranks_of(a, 3), ranks_of(b, 3), ranks_of(c, 3)}));
        ASSERT_EQ(stats.top_agreement, top);
        ASSERT_EQ(stats.bottom_agreement, bottom);
      }
    }
  }
}

TEST(ScoreConsistencyTest, CombinesFields) {
  const auto score = score_consistency(matrix_of({"A>B>C", "A>B>C", "B>A>C"}, 3, "prompt-7"));
  EXPECT_EQ(score.prompt_id, "prompt-7");
  EXPECT_EQ(score.judges, 3u);
  EXPECT_EQ(score.objects, 3u);
  EXPECT_EQ(score.top_agreement, 2u);
  EXPECT_EQ(score.bottom_agreement, 3u);
  EXPECT_NEAR(score.w, 7.0 / 9.0, 1e-12);
}

}  // namespace
}  // namespace reprank
