#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "discarg/corpus.hpp"
#include "discarg/encoder.hpp"
#include "discarg/parser.hpp"
#include "discarg/rst.hpp"
#include "discarg/training.hpp"

namespace discarg {

// Argumentative texts with their paraphrase variants and the RST trees
// parsed for every document (original or variant), keyed by document id.
struct Corpus {
  Language language = Language::kEn;
  std::vector<VariantGroup> groups;
  std::map<std::string, RstNode> rst;

  const VariantGroup* find_group(const std::string& original_id) const;
};

// Reads `<doc_id>.rst.json` files from a directory into the corpus.
void load_rst_dir(Corpus& corpus, const std::string& dir);

struct PipelineConfig {
  Mode mode = Mode::kBap;
  SegmentationMode segmentation = SegmentationMode::kGold;
  bool augmented = false;
};

// Model instance for one document. In gold segmentation the units are the
// ADUs and the RST tree is reduced onto them; end-to-end, the units are the
// RST leaves and the gold tree gains SameArg arcs inside ADUs. RST input is
// required when the mode needs it or the segmentation comes from RST.
Instance build_instance(const Document& doc, const ArgumentTree& gold, const Corpus& corpus,
                        const PipelineConfig& config, const EmbeddingProvider& embeddings);

// Gold tree over the units the model sees for this document: the ADU tree
// itself, or its end-to-end lift onto the RST leaves.
ArgumentTree gold_tree(const Document& doc, const ArgumentTree& gold, const Corpus& corpus,
                       SegmentationMode segmentation);

// Originals plus, when augmented, every paraphrase variant of each group.
std::vector<Instance> build_training_instances(std::span<const VariantGroup* const> groups,
                                               const Corpus& corpus,
                                               const PipelineConfig& config,
                                               const EmbeddingProvider& embeddings);

// Originals only.
std::vector<Instance> build_test_instances(std::span<const VariantGroup* const> groups,
                                           const Corpus& corpus, const PipelineConfig& config,
                                           const EmbeddingProvider& embeddings);

// Model configuration matching the corpus language and embeddings.
ModelConfig model_config(const PipelineConfig& config, const Corpus& corpus,
                         std::size_t d_lm);

}  // namespace discarg
