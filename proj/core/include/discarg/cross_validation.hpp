#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discarg/argeval.hpp"
#include "discarg/encoder.hpp"
#include "discarg/pipeline.hpp"
#include "discarg/training.hpp"

namespace discarg {

// One cross-validation fold over original document ids.
struct Fold {
  std::string id;
  std::vector<std::string> train;
  std::vector<std::string> test;
};

// Accepts a JSON array of folds or an object with a "folds" array; each
// fold is {"id", "train": [...], "test": [...]}.
std::vector<Fold> parse_splits(std::string_view json);
std::vector<Fold> load_splits(const std::string& path);
std::string splits_to_json(std::span<const Fold> folds);

// k folds over the corpus originals, shuffled with `seed`.
std::vector<Fold> make_folds(const Corpus& corpus, std::size_t k, std::uint64_t seed);

// Looks up document groups by original id; unknown ids raise a split error
// naming `context`.
std::vector<const VariantGroup*> resolve_groups(const Corpus& corpus,
                                                const std::vector<std::string>& ids,
                                                const std::string& context);

struct DevSplit {
  std::vector<const VariantGroup*> train;
  std::vector<const VariantGroup*> dev;
};

// Holds out ceil(fraction * |groups|) documents (at least one, never all) as
// development data, chosen by a shuffle seeded from `seed` and `fold_index`.
DevSplit split_dev(std::vector<const VariantGroup*> groups, double fraction, std::uint64_t seed,
                   std::size_t fold_index);

// Model settings that are not derived from the corpus or embeddings.
struct ModelSettings {
  double dropout = 0.2;
  std::size_t arc_dim = 100;
  std::size_t tag_dim = 50;
  double ff_init_std = 10.0;
  bool freeze_coefficients = false;

  void apply(ModelConfig& config) const;
};

struct ExperimentConfig {
  std::string name;
  PipelineConfig pipeline;
  TrainConfig train;
  ModelSettings model;
  double dev_fraction = 0.15;
  std::uint64_t seed = 1;  // model initialization and dev selection
  std::size_t jobs = 1;    // folds trained concurrently
  bool exclude_same_arg = true;
};

struct FoldResult {
  std::string fold_id;
  Scores scores;
  std::size_t train_instances = 0;
  std::size_t dev_instances = 0;
  std::size_t test_instances = 0;
  TrainResult training;
  std::vector<ArgumentTree> predictions;
};

struct CrossValidationResult {
  EvalReport report;
  std::vector<FoldResult> folds;
};

// Trains one model per fold (holding out a dev share of the training
// originals for early stopping) and evaluates it on the fold's originals.
CrossValidationResult cross_validate(const Corpus& corpus, std::span<const Fold> folds,
                                     const ExperimentConfig& config,
                                     const EmbeddingProvider& embeddings);

// Single fold, exposed for callers that schedule folds themselves.
FoldResult run_fold(const Corpus& corpus, const Fold& fold, std::size_t fold_index,
                    const ExperimentConfig& config, const EmbeddingProvider& embeddings);

}  // namespace discarg
