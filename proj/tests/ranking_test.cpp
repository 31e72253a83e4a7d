#include "reprank/ranking.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"

namespace reprank {
namespace {

std::vector<std::string> group_strings(const Ranking& r) {
  std::vector<std::string> out;
  for (const auto& group : r.groups()) {
    std::string s;
    for (Label l : group) s += l.letter();
    out.push_back(s);
  }
  return out;
}

ParseErrorKind parse_error_of(std::string_view expr, LabelSet labels) {
  try {
    parse_ranking(expr, labels);
  } catch (const RankingParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a parse error for '" << expr << "'";
  return ParseErrorKind::kMalformedExpression;
}

TEST(LabelTest, RejectsNonLetters) {
  EXPECT_EQ(Label::from_char('G').index(), 6u);
  EXPECT_THROW(Label::from_char('a'), std::invalid_argument);
  EXPECT_THROW(Label::from_char('['), std::invalid_argument);
  EXPECT_THROW(Label::from_index(26), std::out_of_range);
  EXPECT_THROW(LabelSet::first_n(27), std::invalid_argument);
  EXPECT_EQ(LabelSet::first_n(26).size(), 26u);
}

TEST(ParseRankingTest, ReferenceExample) {
  const auto r = parse_ranking("Z>Y>X=W>V>U=T", LabelSet::from_letters("TUVWXYZ"));
  EXPECT_EQ(group_strings(r), (std::vector<std::string>{"Z", "Y", "WX", "V", "TU"}));
  EXPECT_EQ(r.size(), 7u);
}

TEST(ParseRankingTest, SingleLabel) {
  const auto r = parse_ranking("A", LabelSet::from_letters("A"));
  EXPECT_EQ(group_strings(r), (std::vector<std::string>{"A"}));
}

TEST(ParseRankingTest, MatchesBruteForceSplitter) {
  const std::string expr = "C>A=B>D>E>F=G";
  const auto r = parse_ranking(expr, LabelSet::first_n(7));
  const auto oracle = oracle::brute_split(expr);
  ASSERT_EQ(r.groups().size(), oracle.size());
  for (std::size_t g = 0; g < oracle.size(); ++g) {
    auto expected = oracle[g];
    std::sort(expected.begin(), expected.end());
    std::vector<char> got;
    for (Label l : r.groups()[g]) got.push_back(l.letter());
    EXPECT_EQ(got, expected);
  }
  EXPECT_EQ(group_strings(r), (std::vector<std::string>{"C", "AB", "D", "E", "FG"}));
}

TEST(ParseRankingTest, ToleratesWhitespace) {
  const auto r = parse_ranking("  C >A = B\t> D  ", LabelSet::first_n(4));
  EXPECT_EQ(format_ranking(r), "C>A=B>D");
}

TEST(ParseRankingTest, ErrorClasses) {
  const auto ab = LabelSet::first_n(2);
  const auto abc = LabelSet::first_n(3);
  EXPECT_EQ(parse_error_of("A>B>A", ab), ParseErrorKind::kDuplicateLabel);
  EXPECT_EQ(parse_error_of("A=A", LabelSet::first_n(1)), ParseErrorKind::kDuplicateLabel);
  EXPECT_EQ(parse_error_of("A>B", abc), ParseErrorKind::kMissingLabel);
  EXPECT_EQ(parse_error_of("A>B>C>D", abc), ParseErrorKind::kUnknownLabel);
  EXPECT_EQ(parse_error_of("A>b>C", abc), ParseErrorKind::kUnknownLabel);
  EXPECT_EQ(parse_error_of("", abc), ParseErrorKind::kMalformedExpression);
  EXPECT_EQ(parse_error_of("   ", abc), ParseErrorKind::kMalformedExpression);
  EXPECT_EQ(parse_error_of(">A>B>C", abc), ParseErrorKind::kMalformedExpression);
  EXPECT_EQ(parse_error_of("A>B>C>", abc), ParseErrorKind::kMalformedExpression);
  EXPECT_EQ(parse_error_of("A>>B>C", abc), ParseErrorKind::kMalformedExpression);
  EXPECT_EQ(parse_error_of("A>=B>C", abc), ParseErrorKind::kMalformedExpression);
  EXPECT_EQ(parse_error_of("AB>C", abc), ParseErrorKind::kMalformedExpression);
  EXPECT_EQ(parse_error_of("A,B,C", abc), ParseErrorKind::kMalformedExpression);
  EXPECT_THROW(parse_ranking("A", LabelSet{}), std::invalid_argument);
}

TEST(FormatRankingTest, CanonicalForms) {
  const Ranking tied({{Label::from_char('A')}, {Label::from_char('C'), Label::from_char('B')}});
  EXPECT_EQ(format_ranking(tied), "A>B=C");
  std::vector<Ranking::Group> total;
  for (char c : std::string("GFEDCBA")) total.push_back({Label::from_char(c)});
  EXPECT_EQ(format_ranking(Ranking(total)), "G>F>E>D>C>B>A");
}

TEST(FormatRankingTest, RoundTripsAllPartitionsOfThree) {
  const auto partitions = oracle::ordered_partitions(3);
  ASSERT_EQ(partitions.size(), 13u);
  for (const auto& p : partitions) {
    std::vector<Ranking::Group> groups;
    for (const auto& block : p) {
      auto& g = groups.emplace_back();
      for (int e : block) g.push_back(Label::from_index(e));
    }
    const Ranking r(groups);
    EXPECT_EQ(parse_ranking(format_ranking(r), LabelSet::first_n(3)), r);
    EXPECT_EQ(format_ranking(r), oracle::partition_text(p));
  }
}

TEST(FormatRankingTest, CanonicalizationIsIdempotent) {
  const auto labels = LabelSet::first_n(5);
  const auto once = format_ranking(parse_ranking(" E = B > D>C =A", labels));
  EXPECT_EQ(once, "B=E>D>A=C");
  EXPECT_EQ(format_ranking(parse_ranking(once, labels)), once);
}

TEST(RankingTest, RejectsInvalidGroups) {
  EXPECT_THROW(Ranking(std::vector<Ranking::Group>{Ranking::Group{}}), std::invalid_argument);
  EXPECT_THROW(Ranking({{Label::from_char('A')}, {Label::from_char('A')}}), std::invalid_argument);
}

TEST(RankVectorTest, FractionalRanks) {
  const auto labels = LabelSet::first_n(3);
  const auto untied = to_rank_vector(parse_ranking("A>B>C", labels));
  EXPECT_EQ(untied.values(), (std::vector<double>{1.0, 2.0, 3.0}));
  const auto pair = to_rank_vector(parse_ranking("A=B>C", labels));
  EXPECT_EQ(pair.values(), (std::vector<double>{1.5, 1.5, 3.0}));
  const auto all = to_rank_vector(parse_ranking("A=B=C", labels));
  EXPECT_EQ(all.values(), (std::vector<double>{2.0, 2.0, 2.0}));
  EXPECT_THROW(all.rank(Label::from_char('D')), std::out_of_range);
}

TEST(RankVectorTest, RankSumConservedForAllPartitionsUpToSeven) {
  for (int n = 1; n <= 7; ++n) {
    const double expected = n * (n + 1) / 2.0;
    for (const auto& p : oracle::ordered_partitions(n)) {
      const auto v = to_rank_vector(parse_ranking(oracle::partition_text(p), LabelSet::first_n(n)));
      const auto values = v.values();
      ASSERT_EQ(std::accumulate(values.begin(), values.end(), 0.0), expected);
      ASSERT_EQ(values, oracle::fractional_ranks(p, n));
      ASSERT_GE(*std::min_element(values.begin(), values.end()), 1.0);
      ASSERT_LE(*std::max_element(values.begin(), values.end()), static_cast<double>(n));
    }
  }
}

TEST(RankingPropertyTest, RelabelingCommutesWithParsing) {
  std::mt19937 rng(11);
  const auto partitions = oracle::ordered_partitions(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto& p = partitions[rng() % partitions.size()];
    std::vector<int> perm(5);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    std::string relabeled = oracle::partition_text(p);
    for (char& c : relabeled) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>('A' + perm[c - 'A']);
    }
    const auto parsed_after = parse_ranking(relabeled, LabelSet::first_n(5));

    const auto parsed_before = parse_ranking(oracle::partition_text(p), LabelSet::first_n(5));
    std::vector<Ranking::Group> mapped;
    for (const auto& group : parsed_before.groups()) {
      auto& g = mapped.emplace_back();
      for (Label l : group) g.push_back(Label::from_index(perm[l.index()]));
    }
    EXPECT_EQ(parsed_after, Ranking(mapped));
  }
}

TEST(RankingMatrixTest, RejectsMixedLabelSets) {
  const auto a = to_rank_vector(parse_ranking("A>B", LabelSet::first_n(2)));
  const auto b = to_rank_vector(parse_ranking("A>B>C", LabelSet::first_n(3)));
  EXPECT_THROW(RankingMatrix("p", {a, b}), std::invalid_argument);
  EXPECT_EQ(RankingMatrix("p", {a, a}).judges(), 2u);
}

}  // namespace
}  // namespace reprank
