#pragma once

#include <cstdint>

#include "discarg/corpus.hpp"
#include "discarg/pipeline.hpp"

namespace discarg {

// Random corpus for tests, benchmarks and demonstrations. Each document has
// a random RST tree over its ADUs; the gold argument tree copies the RST
// dependencies and then re-heads a share of (1 - rst_agreement) of the
// non-root arcs. Texts are random pseudo-words, so the embeddings carry no
// structural signal.
struct SyntheticConfig {
  std::size_t documents = 10;
  std::size_t min_units = 3;
  std::size_t max_units = 6;
  double rst_agreement = 0.8;
  double attack_rate = 0.3;
  std::size_t variants_per_document = 0;
  // Probability that an ADU is split into two EDUs in the RST tree.
  double edu_split_rate = 0.0;
  Language language = Language::kEn;
  std::uint64_t seed = 1;
};

Corpus make_synthetic_corpus(const SyntheticConfig& config);

// Writes documents as JSON bundles and RST trees as `<id>.rst.json` files.
void save_corpus(const Corpus& corpus, const std::string& corpus_dir, const std::string& rst_dir);
// Reads bundles (and RST trees, if `rst_dir` is non-empty).
Corpus load_corpus(const std::string& corpus_dir, const std::string& rst_dir);

}  // namespace discarg
