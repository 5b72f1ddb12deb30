#include <gtest/gtest.h>

#include "discarg/corpus.hpp"
#include "discarg/rst.hpp"
#include "expect_error.hpp"

namespace discarg {
namespace {

const std::string kFixtures = DISCARG_FIXTURE_DIR;

// Leaves [0,5) [5,10) [10,15): (1 <-Cause- 2) as nucleus, 3 an Elaborate satellite.
RstNode small_tree() {
  RstNode left = RstNode::internal({RstNode::leaf({0, 5}), RstNode::leaf({5, 10})},
                                   {Nuclearity::kNucleus, Nuclearity::kSatellite},
                                   {"span", "Cause"});
  return RstNode::internal({left, RstNode::leaf({10, 15})},
                           {Nuclearity::kNucleus, Nuclearity::kSatellite}, {"span", "Elaborate"});
}

TEST(RstTest, DependenciesFollowNuclei) {
  const RstDependencies deps = to_dependencies(small_tree());
  EXPECT_EQ(deps.heads, (std::vector<int>{-1, 0, 1, 1}));
  EXPECT_EQ(deps.relations[2].label, "Cause");
  EXPECT_EQ(deps.relations[3].label, "Elaborate");
  EXPECT_EQ(deps.nuclearity[2], Nuclearity::kSatellite);
}

TEST(RstTest, MultinuclearHeadIsFirstNucleus) {
  const RstNode tree = RstNode::internal(
      {RstNode::leaf({0, 3}), RstNode::leaf({3, 6}), RstNode::leaf({6, 9})},
      {Nuclearity::kNucleus, Nuclearity::kNucleus, Nuclearity::kNucleus},
      {"Joint", "Joint", "Joint"});
  const RstDependencies deps = to_dependencies(tree);
  EXPECT_EQ(deps.heads, (std::vector<int>{-1, 0, 1, 1}));
  EXPECT_EQ(deps.nuclearity[2], Nuclearity::kNucleus);
}

TEST(RstTest, JsonRoundTripAndFixture) {
  const RstDocument doc{"x", 15, small_tree()};
  const RstDocument back = parse_rst_json_text(to_json(doc));
  EXPECT_EQ(back.root, doc.root);
  const RstDocument fixture = parse_rst_json(kFixtures + "/micro/micro_k002.rst.json");
  EXPECT_EQ(leaf_count(fixture.root), 8u);
}

TEST(RstTest, ValidationErrors) {
  RstNode gap = RstNode::internal({RstNode::leaf({0, 5}), RstNode::leaf({6, 10})},
                                  {Nuclearity::kNucleus, Nuclearity::kSatellite},
                                  {"span", "Cause"});
  EXPECT_ERROR_KIND(validate(gap), ErrorKind::kSegmentation);
  RstNode no_nucleus = RstNode::internal({RstNode::leaf({0, 5}), RstNode::leaf({5, 10})},
                                         {Nuclearity::kSatellite, Nuclearity::kSatellite},
                                         {"Cause", "Cause"});
  EXPECT_ERROR_KIND(validate(no_nucleus), ErrorKind::kNuclearity);
  EXPECT_ERROR_KIND(validate(small_tree(), 20), ErrorKind::kSegmentation);
  EXPECT_ERROR_KIND(parse_rst_json_text("{"), ErrorKind::kParse);
}

TEST(RstTest, ReductionMergesFragmentsOfOneUnit) {
  std::vector<DiscourseUnit> adus(2);
  adus[0].id = "a1";
  adus[0].span = {0, 10};
  adus[1].id = "a2";
  adus[1].span = {10, 15};
  const RstNode reduced = reduce_to_segmentation(small_tree(), adus);
  ASSERT_EQ(leaf_count(reduced), 2u);
  const RstDependencies deps = to_dependencies(reduced);
  EXPECT_EQ(deps.heads, (std::vector<int>{-1, 0, 1}));
  EXPECT_EQ(deps.relations[2].label, "Elaborate");
}

TEST(RstTest, ReductionRejectsUnitWithoutLeaves) {
  std::vector<DiscourseUnit> adus(3);
  adus[0].span = {0, 10};
  adus[1].span = {10, 15};
  adus[2].span = {15, 20};
  adus[2].id = "ghost";
  EXPECT_ERROR_KIND(reduce_to_segmentation(small_tree(), adus), ErrorKind::kAlignment);
}

TEST(RstTest, AdjacencyLayout) {
  const RstDependencies deps = to_dependencies(small_tree());
  const auto& inv = RelationInventory::builtin(Language::kEn);
  const RstAdjacency a = adjacency(deps, inv, 3);
  const std::size_t cause = 2 * inv.require("Cause");
  EXPECT_EQ(a.adj(1, 0), 1.0);  // unit 2 heads to unit 1
  EXPECT_EQ(a.adj(0, 1), 0.0);
  EXPECT_EQ(a.full_at(1, 0, cause), 1.0);
  EXPECT_EQ(a.inverted(0 * 3 + 1, cause + 1), 1.0);
  EXPECT_EQ(a.full.sum(), 2.0);
  EXPECT_EQ(a.inverted.sum(), 2.0);
  EXPECT_ERROR_KIND(adjacency(deps, inv, 4), ErrorKind::kBounds);
}

TEST(InventoryTest, BuiltinLookupAndUnknownLabel) {
  const auto& en = RelationInventory::builtin(Language::kEn);
  EXPECT_EQ(en.find("elaboration"), en.find("Elaborate"));
  EXPECT_EQ(en.k(), 2 * en.labels.size());
  EXPECT_ERROR_KIND(en.require("Nonexistent"), ErrorKind::kMapping);
  const auto& ru = RelationInventory::builtin(Language::kRu);
  EXPECT_TRUE(ru.find("Preparation").has_value());
}

TEST(InventoryTest, ShippedFilesMatchBuiltins) {
  for (Language lang : {Language::kEn, Language::kRu}) {
    const auto& builtin = RelationInventory::builtin(lang);
    const RelationInventory file = RelationInventory::load(
        std::string(DISCARG_DATA_DIR) + "/inventory/" + std::string(to_string(lang)) + ".v1.txt");
    EXPECT_EQ(file.language, lang);
    EXPECT_EQ(file.version, builtin.version);
    EXPECT_EQ(file.labels, builtin.labels);
  }
}

}  // namespace
}  // namespace discarg
