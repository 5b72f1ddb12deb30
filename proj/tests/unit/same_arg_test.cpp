#include <gtest/gtest.h>

#include "discarg/argeval.hpp"
#include "discarg/corpus.hpp"
#include "discarg/pipeline.hpp"
#include "discarg/rst.hpp"
#include "discarg/same_arg.hpp"
#include "expect_error.hpp"

namespace discarg {
namespace {

const std::string kFixtures = DISCARG_FIXTURE_DIR;
using F = ArgumentFunction;

struct Micro {
  Document doc;
  ArgumentTree gold;
  RstNode rst;
};

Micro load_micro() {
  const auto loaded = load_arggraph_xml(kFixtures + "/micro/micro_k002.xml");
  return {loaded.document, simplify_functions(loaded.tree),
          parse_rst_json(kFixtures + "/micro/micro_k002.rst.json").root};
}

TEST(SameArgTest, MicroFixtureLiftsOntoEdus) {
  const Micro m = load_micro();
  const auto spans = leaf_spans(m.rst);
  const ArgumentTree edu = attach_same_arg(to_dependencies(m.rst), spans, m.doc.units, m.gold);
  ASSERT_EQ(edu.size(), 8u);
  EXPECT_EQ(edu.heads, (std::vector<int>{-1, 0, 1, 4, 1, 1, 1, 6, 1}));
  EXPECT_EQ(edu.functions,
            (std::vector<F>{F::kCc, F::kCc, F::kSameArg, F::kSameArg, F::kSupport, F::kSupport,
                            F::kSupport, F::kSameArg, F::kSupport}));
  EXPECT_EQ(std::count(edu.functions.begin() + 1, edu.functions.end(), F::kSameArg), 3);
  ASSERT_TRUE(edu.has_roles());
}

TEST(SameArgTest, PipelineGoldTreeAgrees) {
  const Micro m = load_micro();
  Corpus corpus;
  corpus.rst["micro_k002"] = m.rst;
  const ArgumentTree edu = gold_tree(m.doc, m.gold, corpus, SegmentationMode::kEndToEnd);
  EXPECT_EQ(std::count(edu.functions.begin() + 1, edu.functions.end(), F::kSameArg), 3);
  EXPECT_EQ(gold_tree(m.doc, m.gold, corpus, SegmentationMode::kGold).heads, m.gold.heads);
}

TEST(SameArgTest, ExclusionRemovesExactlyTheSameArgUnits) {
  const Micro m = load_micro();
  const ArgumentTree gold =
      attach_same_arg(to_dependencies(m.rst), leaf_spans(m.rst), m.doc.units, m.gold);
  ArgumentTree pred = gold;
  pred.roles.clear();
  // Misattach every intra-unit arc; the exclusion must hide all of them.
  pred.heads[2] = 8;
  pred.heads[3] = 5;
  pred.heads[7] = 5;
  const DocCounts with = evaluate(pred, gold, true);
  const DocCounts without = evaluate(pred, gold, false);
  EXPECT_EQ(with.attachments, 4u);
  EXPECT_EQ(without.attachments, 7u);
  EXPECT_EQ(with.uas, 4u);
  EXPECT_EQ(without.uas, 4u);
}

TEST(SameArgTest, UnitWithoutEduIsAnAlignmentError) {
  const Micro m = load_micro();
  std::vector<DiscourseUnit> adus = m.doc.units;
  DiscourseUnit extra;
  extra.id = "ghost";
  extra.span = {m.doc.text.size() + 5, m.doc.text.size() + 9};
  adus.push_back(extra);
  ArgumentTree tree = ArgumentTree::with_size("micro_k002", 6);
  tree.heads = {-1, 0, 1, 1, 1, 1, 1};
  tree.functions = {F::kCc, F::kCc, F::kSupport, F::kSupport, F::kSupport, F::kSupport,
                    F::kSupport};
  EXPECT_ERROR_KIND(attach_same_arg(to_dependencies(m.rst), leaf_spans(m.rst), adus, tree),
                    ErrorKind::kAlignment);
}

}  // namespace
}  // namespace discarg
