#include <random>

#include <gtest/gtest.h>

#include "discarg/argeval.hpp"
#include "discarg/roles.hpp"
#include "expect_error.hpp"
#include "oracles.hpp"

namespace discarg {
namespace {

using F = ArgumentFunction;

ArgumentTree make_tree(std::vector<int> heads, std::vector<F> functions) {
  ArgumentTree t = ArgumentTree::with_size("doc", heads.size());
  t.heads.assign(1, -1);
  t.heads.insert(t.heads.end(), heads.begin(), heads.end());
  t.functions.assign(1, F::kCc);
  t.functions.insert(t.functions.end(), functions.begin(), functions.end());
  return t;
}

Scores score_one(const ArgumentTree& pred, const ArgumentTree& gold, bool exclude = true) {
  const std::vector<DocCounts> docs = {evaluate(pred, gold, exclude)};
  return aggregate(docs);
}

// The expected values below were counted by hand from per-class tp/fp/fn.
TEST(EvaluateTest, OneMisattachedAttack) {
  const auto gold = make_tree({0, 1, 1, 1, 1}, {F::kCc, F::kSupport, F::kSupport, F::kSupport,
                                                F::kSupport});
  const auto pred = make_tree({0, 1, 1, 1, 2}, {F::kCc, F::kSupport, F::kSupport, F::kSupport,
                                                F::kAttack});
  const Scores s = score_one(pred, gold);
  EXPECT_NEAR(s.cc, 100.0, 1e-9);
  EXPECT_NEAR(s.ro, (800.0 / 9.0 + 0.0) / 2.0, 1e-9);
  EXPECT_NEAR(s.fu, (100.0 + 600.0 / 7.0 + 0.0) / 3.0, 1e-9);
  EXPECT_NEAR(s.at, 75.0, 1e-9);
  EXPECT_NEAR(s.uas, 75.0, 1e-9);
  EXPECT_NEAR(s.las, 75.0, 1e-9);
}

TEST(EvaluateTest, WrongCentralClaim) {
  const auto gold = make_tree({0, 1, 2}, {F::kCc, F::kSupport, F::kAttack});
  const auto pred = make_tree({2, 0, 2}, {F::kSupport, F::kCc, F::kAttack});
  const Scores s = score_one(pred, gold);
  EXPECT_NEAR(s.cc, 25.0, 1e-9);
  EXPECT_NEAR(s.ro, 100.0, 1e-9);
  EXPECT_NEAR(s.fu, 100.0 / 3.0, 1e-9);
  EXPECT_NEAR(s.at, 50.0, 1e-9);
  EXPECT_NEAR(s.uas, 50.0, 1e-9);
  EXPECT_NEAR(s.las, 50.0, 1e-9);
}

TEST(EvaluateTest, SameArgExclusion) {
  const auto gold = make_tree({0, 1, 1, 3}, {F::kCc, F::kSameArg, F::kSupport, F::kAttack});
  const auto pred = make_tree({0, 3, 1, 3}, {F::kCc, F::kSameArg, F::kAttack, F::kAttack});
  const Scores s = score_one(pred, gold, true);
  EXPECT_NEAR(s.cc, 100.0, 1e-9);
  EXPECT_NEAR(s.ro, 20.0, 1e-9);
  EXPECT_NEAR(s.fu, (100.0 + 0.0 + 200.0 / 3.0) / 3.0, 1e-9);
  EXPECT_NEAR(s.at, 100.0, 1e-9);
  EXPECT_NEAR(s.uas, 100.0, 1e-9);
  EXPECT_NEAR(s.las, 50.0, 1e-9);
  const DocCounts counts = evaluate(pred, gold, true);
  EXPECT_EQ(counts.attachments, 2u);

  const Scores all = score_one(pred, gold, false);
  EXPECT_NEAR(all.uas, 200.0 / 3.0, 1e-9);
  EXPECT_NEAR(all.las, 100.0 / 3.0, 1e-9);
  EXPECT_NEAR(all.at, 200.0 / 3.0, 1e-9);
}

TEST(EvaluateTest, SelfEvaluationIsPerfect) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto gold = oracle::random_tree(rng, 1 + trial % 9);
    for (double v : score_one(gold, gold).values()) EXPECT_EQ(v, 100.0);
  }
}

TEST(EvaluateTest, LabeledNeverExceedsUnlabeled) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + trial % 10;
    const auto gold = oracle::random_tree(rng, n);
    const auto pred = oracle::random_tree(rng, n);
    const Scores s = score_one(pred, gold);
    ASSERT_LE(s.las, s.uas);
  }
}

TEST(EvaluateTest, NonTreePredictionCountsRolesAsMisses) {
  const auto gold = make_tree({0, 1}, {F::kCc, F::kSupport});
  const auto pred = make_tree({0, 0}, {F::kCc, F::kCc});
  const DocCounts c = evaluate(pred, gold, true);
  EXPECT_EQ(c.ro[0].fn, 2u);
  EXPECT_EQ(c.ro[0].tp, 0u);
}

TEST(EvaluateTest, Errors) {
  const auto a = make_tree({0, 1}, {F::kCc, F::kSupport});
  const auto b = make_tree({0, 1, 1}, {F::kCc, F::kSupport, F::kSupport});
  EXPECT_ERROR_KIND(evaluate(a, b, true), ErrorKind::kArgument);
  EXPECT_ERROR_KIND(aggregate(std::vector<DocCounts>{}), ErrorKind::kEmptyReport);
}

TEST(AggregateTest, CentralClaimIsAveragedPerDocument) {
  const auto gold = make_tree({0, 1, 2}, {F::kCc, F::kSupport, F::kAttack});
  const auto wrong = make_tree({2, 0, 2}, {F::kSupport, F::kCc, F::kAttack});
  const std::vector<DocCounts> docs = {evaluate(gold, gold, true), evaluate(wrong, gold, true)};
  EXPECT_NEAR(aggregate(docs).cc, (100.0 + 25.0) / 2.0, 1e-9);
  // Attachments pool over documents: 2 + 1 correct out of 4.
  EXPECT_NEAR(aggregate(docs).uas, 75.0, 1e-9);
}

TEST(TTestTest, MatchesClosedFormDistribution) {
  const std::vector<double> a2 = {3.0, 5.0}, b2 = {1.0, 2.0};
  const TTest t1 = paired_ttest(a2, b2);
  EXPECT_EQ(t1.df, 1u);
  // differences {2, 3}: mean 2.5, sd sqrt(0.5), t = 2.5 / (sqrt(0.5)/sqrt(2)) = 5.
  EXPECT_NEAR(t1.t, 5.0, 1e-12);
  EXPECT_NEAR(t1.p, oracle::t_two_sided_p(5.0, 1), 1e-12);

  const std::vector<double> a3 = {1.0, 4.0, 2.0}, b3 = {0.0, 1.0, 1.5};
  const TTest t2 = paired_ttest(a3, b3);
  EXPECT_EQ(t2.df, 2u);
  EXPECT_NEAR(t2.p, oracle::t_two_sided_p(t2.t, 2), 1e-12);
}

TEST(TTestTest, DegenerateDifferences) {
  const std::vector<double> a = {2.0, 2.0, 2.0}, b = {1.0, 1.0, 1.0};
  const TTest t = paired_ttest(a, b);
  EXPECT_TRUE(t.degenerate);
  EXPECT_EQ(t.p, 0.0);
  const TTest same = paired_ttest(a, a);
  EXPECT_EQ(same.p, 1.0);
  EXPECT_ERROR_KIND(paired_ttest(std::vector<double>{1.0}, std::vector<double>{1.0}),
                    ErrorKind::kArgument);
}

TEST(ReportTest, MarkdownAndTsvLayout) {
  Scores a, b;
  a = Scores::from_values({50, 50, 50, 50, 50, 50});
  b = Scores::from_values({60, 60, 60, 60, 70, 60});
  Scores b2 = Scores::from_values({61, 61, 61, 61, 72, 61});
  Scores a2 = Scores::from_values({51, 51, 51, 51, 51, 51});
  const std::vector<EvalReport> reports = {make_report("bap", {a, a2}),
                                           make_report("dbap6", {b, b2})};
  EXPECT_NEAR(reports[0].mean.cc, 50.5, 1e-12);
  EXPECT_NEAR(reports[0].std.cc, 0.5, 1e-12);
  const std::string tsv = report_tsv(reports);
  EXPECT_EQ(tsv.substr(0, tsv.find('\n')), "model\tcc\tro\tfu\tat\tUAS\tLAS");
  EXPECT_NE(tsv.find("bap\t50.5 ± 0.5"), std::string::npos);
  const std::string md = report_markdown(reports);
  EXPECT_NE(md.find("| model | cc | ro | fu | at | UAS | LAS |"), std::string::npos);
  EXPECT_EQ(significance_marker(0.001), "**");
  EXPECT_EQ(significance_marker(0.01), "*");
  EXPECT_EQ(significance_marker(0.2), "");
}

}  // namespace
}  // namespace discarg
