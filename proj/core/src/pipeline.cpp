#include "discarg/pipeline.hpp"

#include <algorithm>
#include <filesystem>

#include <fmt/format.h>

#include "discarg/errors.hpp"
#include "discarg/same_arg.hpp"

namespace discarg {

const VariantGroup* Corpus::find_group(const std::string& original_id) const {
  for (const auto& g : groups)
    if (g.original.id == original_id) return &g;
  return nullptr;
}

void load_rst_dir(Corpus& corpus, const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) fail(ErrorKind::kIo, fmt::format("'{}' is not a directory", dir));
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() > 9 &&
        name.compare(name.size() - 9, 9, ".rst.json") == 0)
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    RstDocument doc = parse_rst_json(path.string());
    std::string id = doc.doc_id;
    if (id.empty()) {
      id = path.filename().string();
      id.resize(id.size() - 9);
    }
    corpus.rst[id] = std::move(doc.root);
  }
}

namespace {

bool needs_rst(const PipelineConfig& config) {
  return config.mode != Mode::kBap || config.segmentation == SegmentationMode::kEndToEnd;
}

const RstNode& require_rst(const Corpus& corpus, const std::string& doc_id) {
  const auto it = corpus.rst.find(doc_id);
  if (it == corpus.rst.end())
    fail(ErrorKind::kReference, fmt::format("no RST tree for document '{}'", doc_id));
  return it->second;
}

}  // namespace

ModelConfig model_config(const PipelineConfig& config, const Corpus& corpus, std::size_t d_lm) {
  ModelConfig out;
  out.mode = config.mode;
  out.segmentation = config.segmentation;
  out.d_lm = d_lm;
  out.rst_labels = RelationInventory::builtin(corpus.language).k();
  return out;
}

ArgumentTree gold_tree(const Document& doc, const ArgumentTree& gold, const Corpus& corpus,
                       SegmentationMode segmentation) {
  if (segmentation == SegmentationMode::kGold) {
    ArgumentTree out = gold;
    out.doc_id = doc.id;
    return out;
  }
  const RstNode& tree = require_rst(corpus, doc.id);
  validate(tree, doc.text.size());
  ArgumentTree out = attach_same_arg(to_dependencies(tree), leaf_spans(tree), doc.units, gold);
  out.doc_id = doc.id;
  return out;
}

Instance build_instance(const Document& doc, const ArgumentTree& gold, const Corpus& corpus,
                        const PipelineConfig& config, const EmbeddingProvider& embeddings) {
  if (gold.size() != doc.size())
    fail(ErrorKind::kAlignment, fmt::format("document '{}' has {} units, gold tree has {}",
                                            doc.id, doc.size(), gold.size()));
  Instance inst;
  inst.doc_id = doc.id;
  inst.original = doc.variant == Variant::kOriginal;
  inst.source_doc_id = doc.source_doc_id.value_or(doc.id);
  const RelationInventory& inventory = RelationInventory::builtin(corpus.language);

  if (config.segmentation == SegmentationMode::kGold) {
    inst.units = embeddings.unit_vectors(doc);
    inst.gold = gold;
    inst.gold.doc_id = doc.id;
    if (needs_rst(config)) {
      const RstNode reduced = reduce_to_segmentation(require_rst(corpus, doc.id), doc.units);
      inst.rst = adjacency(to_dependencies(reduced), inventory, doc.size());
    }
    return inst;
  }

  const RstNode& tree = require_rst(corpus, doc.id);
  validate(tree, doc.text.size());
  const std::vector<Span> edus = leaf_spans(tree);
  Document edu_doc = doc;
  edu_doc.units.clear();
  for (std::size_t i = 0; i < edus.size(); ++i)
    edu_doc.units.push_back({fmt::format("e{}", i + 1),
                             doc.text.substr(edus[i].start, edus[i].length()), edus[i],
                             UnitKind::kEdu});
  const RstDependencies deps = to_dependencies(tree);
  inst.units = embeddings.unit_vectors(edu_doc);
  inst.gold = attach_same_arg(deps, edus, doc.units, gold);
  inst.gold.doc_id = doc.id;
  if (config.mode != Mode::kBap) inst.rst = adjacency(deps, inventory, edus.size());
  return inst;
}

std::vector<Instance> build_training_instances(std::span<const VariantGroup* const> groups,
                                               const Corpus& corpus,
                                               const PipelineConfig& config,
                                               const EmbeddingProvider& embeddings) {
  std::vector<Instance> out;
  for (const VariantGroup* g : groups) {
    out.push_back(build_instance(g->original, g->gold, corpus, config, embeddings));
    if (!config.augmented) continue;
    for (const auto& v : g->variants)
      out.push_back(build_instance(v, g->gold, corpus, config, embeddings));
  }
  return out;
}

std::vector<Instance> build_test_instances(std::span<const VariantGroup* const> groups,
                                           const Corpus& corpus, const PipelineConfig& config,
                                           const EmbeddingProvider& embeddings) {
  std::vector<Instance> out;
  for (const VariantGroup* g : groups)
    out.push_back(build_instance(g->original, g->gold, corpus, config, embeddings));
  return out;
}

}  // namespace discarg
