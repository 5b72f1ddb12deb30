#include <filesystem>

#include <gtest/gtest.h>

#include "discarg/corpus.hpp"
#include "expect_error.hpp"

namespace discarg {
namespace {

const std::string kFixtures = DISCARG_FIXTURE_DIR;

TEST(ArgGraphTest, LoadsStarFixture) {
  const auto loaded = load_arggraph_xml(kFixtures + "/micro/micro_k002.xml");
  EXPECT_EQ(loaded.document.id, "micro_k002");
  ASSERT_EQ(loaded.document.size(), 5u);
  EXPECT_EQ(loaded.tree.heads, (std::vector<int>{-1, 0, 1, 1, 1, 1}));
  const ArgumentTree simple = simplify_functions(loaded.tree);
  EXPECT_EQ(simple.functions[1], ArgumentFunction::kCc);
  for (int i = 2; i <= 5; ++i) EXPECT_EQ(simple.functions[i], ArgumentFunction::kSupport);
  for (const auto& unit : loaded.document.units)
    EXPECT_EQ(loaded.document.text.substr(unit.span.start, unit.span.length()), unit.text);
}

TEST(ArgGraphTest, UndercutAttachesToTargetedEdgeSource) {
  const std::string xml = R"(<arggraph id="u">
    <edu id="e1">Claim.</edu><edu id="e2">Premise.</edu><edu id="e3">Undercutter.</edu>
    <adu id="a1"/><adu id="a2"/><adu id="a3"/>
    <edge id="c1" src="e1" trg="a1" type="seg"/>
    <edge id="c2" src="e2" trg="a2" type="seg"/>
    <edge id="c3" src="e3" trg="a3" type="seg"/>
    <edge id="c4" src="a2" trg="a1" type="sup"/>
    <edge id="c5" src="a3" trg="c4" type="und"/>
  </arggraph>)";
  const auto loaded = parse_arggraph_xml(xml);
  EXPECT_EQ(loaded.tree.heads, (std::vector<int>{-1, 0, 1, 2}));
  const ArgumentTree simple = simplify_functions(loaded.tree);
  EXPECT_EQ(simple.functions[3], ArgumentFunction::kAttack);
}

TEST(ArgGraphTest, ReportsErrors) {
  EXPECT_ERROR_KIND(parse_arggraph_xml("<arggraph><edu id='e1'>x</arggraph>"), ErrorKind::kParse);
  EXPECT_ERROR_KIND(parse_arggraph_xml(R"(<arggraph id="x">
      <edu id="e1">A.</edu><adu id="a1"/>
      <edge id="c1" src="e1" trg="a1" type="seg"/>
      <edge id="c2" src="a1" trg="a9" type="sup"/></arggraph>)"),
                    ErrorKind::kIntegrity);
  EXPECT_ERROR_KIND(parse_arggraph_xml(R"(<arggraph id="x">
      <edu id="e1">A.</edu><edu id="e2">B.</edu><adu id="a1"/><adu id="a2"/>
      <edge id="c1" src="e1" trg="a1" type="seg"/><edge id="c2" src="e2" trg="a2" type="seg"/>
      <edge id="c3" src="a1" trg="a2" type="sup"/><edge id="c4" src="a2" trg="a1" type="sup"/>
      </arggraph>)"),
                    ErrorKind::kStructure);
}

TEST(TreeTest, ValidationRules) {
  ArgumentTree t = ArgumentTree::with_size("t", 3);
  t.heads = {-1, 0, 1, 2};
  t.functions = {ArgumentFunction::kCc, ArgumentFunction::kCc, ArgumentFunction::kSupport,
                 ArgumentFunction::kAttack};
  EXPECT_NO_THROW(validate(t));
  EXPECT_EQ(t.root_child(), 1);
  t.heads = {-1, 0, 3, 2};
  EXPECT_ERROR_KIND(validate(t), ErrorKind::kStructure);
  t.heads = {-1, 0, 0, 2};
  EXPECT_ERROR_KIND(validate(t), ErrorKind::kStructure);
  t.heads = {-1, 0, 1, 2};
  t.functions[2] = ArgumentFunction::kCc;
  EXPECT_ERROR_KIND(validate(t), ErrorKind::kStructure);
}

TEST(TreeTest, UnknownEdgeTypeIsAMappingError) {
  ArgumentTree t = ArgumentTree::with_size("t", 2);
  t.heads = {-1, 0, 1};
  t.raw_types = {"", "", "bogus"};
  EXPECT_ERROR_KIND(simplify_functions(t), ErrorKind::kMapping);
}

TEST(BundleTest, JsonRoundTrip) {
  const auto loaded = load_arggraph_xml(kFixtures + "/micro/micro_k002.xml");
  DocumentBundle bundle{loaded.document, simplify_functions(loaded.tree)};
  const DocumentBundle back = bundle_from_json(to_json(bundle));
  EXPECT_EQ(back.document, bundle.document);
  ASSERT_TRUE(back.argument.has_value());
  EXPECT_EQ(back.argument->heads, bundle.argument->heads);
  EXPECT_EQ(back.argument->functions, bundle.argument->functions);
}

TEST(BundleTest, VariantsGroupWithTheirOriginal) {
  Document original = make_document("d1", Language::kEn, {"Claim here.", "Because reasons."});
  ArgumentTree gold = ArgumentTree::with_size("d1", 2);
  gold.heads = {-1, 0, 1};
  gold.functions = {ArgumentFunction::kCc, ArgumentFunction::kCc, ArgumentFunction::kSupport};
  Document variant = make_document("d1_bt", Language::kEn, {"A claim.", "For reasons."});
  variant.variant = Variant::kBackTranslated;
  variant.source_doc_id = "d1";
  const auto groups = group_bundles({{original, gold}, {variant, std::nullopt}});
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].size(), 2u);

  Document orphan = variant;
  orphan.source_doc_id = "missing";
  EXPECT_ERROR_KIND(group_bundles({{original, gold}, {orphan, std::nullopt}}),
                    ErrorKind::kReference);
  Document short_variant = make_document("d1_bt", Language::kEn, {"Only one."});
  short_variant.variant = Variant::kBackTranslated;
  short_variant.source_doc_id = "d1";
  EXPECT_ERROR_KIND(group_bundles({{original, gold}, {short_variant, std::nullopt}}),
                    ErrorKind::kAlignment);
}

}  // namespace
}  // namespace discarg
