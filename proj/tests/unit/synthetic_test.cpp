#include <filesystem>

#include <gtest/gtest.h>

#include "discarg/rst.hpp"
#include "discarg/synthetic.hpp"

namespace discarg {
namespace {

double arc_agreement(const Corpus& corpus) {
  std::size_t same = 0, total = 0;
  for (const auto& g : corpus.groups) {
    const RstDependencies deps = to_dependencies(corpus.rst.at(g.original.id));
    for (std::size_t i = 1; i < g.gold.heads.size(); ++i) {
      if (g.gold.heads[i] == 0) continue;
      ++total;
      same += deps.heads[i] == g.gold.heads[i] ? 1 : 0;
    }
  }
  return static_cast<double>(same) / static_cast<double>(total);
}

TEST(SyntheticTest, ShapeAndDeterminism) {
  SyntheticConfig c;
  c.documents = 12;
  c.variants_per_document = 2;
  const Corpus a = make_synthetic_corpus(c);
  const Corpus b = make_synthetic_corpus(c);
  ASSERT_EQ(a.groups.size(), 12u);
  EXPECT_EQ(a.rst.size(), 36u);
  for (std::size_t i = 0; i < a.groups.size(); ++i) {
    EXPECT_EQ(a.groups[i].original.text, b.groups[i].original.text);
    EXPECT_EQ(a.groups[i].gold.heads, b.groups[i].gold.heads);
    EXPECT_EQ(a.groups[i].variants.size(), 2u);
    EXPECT_NO_THROW(validate(a.groups[i].gold));
    const std::size_t n = a.groups[i].gold.size();
    EXPECT_GE(n, c.min_units);
    EXPECT_LE(n, c.max_units);
  }
}

TEST(SyntheticTest, AgreementFollowsTheSetting) {
  SyntheticConfig c;
  c.documents = 200;
  c.rst_agreement = 1.0;
  EXPECT_DOUBLE_EQ(arc_agreement(make_synthetic_corpus(c)), 1.0);
  c.rst_agreement = 0.8;
  EXPECT_NEAR(arc_agreement(make_synthetic_corpus(c)), 0.8, 0.05);
}

TEST(SyntheticTest, SaveLoadRoundTrip) {
  SyntheticConfig c;
  c.documents = 3;
  c.variants_per_document = 1;
  c.edu_split_rate = 0.5;
  const Corpus corpus = make_synthetic_corpus(c);
  const auto dir = std::filesystem::temp_directory_path() / "discarg_synth_roundtrip";
  std::filesystem::remove_all(dir);
  save_corpus(corpus, (dir / "corpus").string(), (dir / "rst").string());
  const Corpus back = load_corpus((dir / "corpus").string(), (dir / "rst").string());
  ASSERT_EQ(back.groups.size(), corpus.groups.size());
  EXPECT_EQ(back.rst.size(), corpus.rst.size());
  for (std::size_t i = 0; i < corpus.groups.size(); ++i) {
    EXPECT_EQ(back.groups[i].original.id, corpus.groups[i].original.id);
    EXPECT_EQ(back.groups[i].gold.heads, corpus.groups[i].gold.heads);
    EXPECT_EQ(back.groups[i].variants.size(), 1u);
  }
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace discarg
