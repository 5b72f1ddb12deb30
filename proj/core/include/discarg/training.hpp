#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "discarg/adam.hpp"
#include "discarg/corpus.hpp"
#include "discarg/errors.hpp"
#include "discarg/parser.hpp"
#include "discarg/rst.hpp"

namespace discarg {

// One document ready for the model: unit vectors, optional RST adjacency
// over the same units, and the gold tree.
struct Instance {
  std::string doc_id;
  std::string source_doc_id;  // id of the original the instance derives from
  bool original = true;
  Matrix units;  // n x d_lm
  std::optional<RstAdjacency> rst;
  ArgumentTree gold;

  std::size_t size() const { return static_cast<std::size_t>(units.rows()); }
};

struct TrainConfig {
  std::size_t max_epochs = 75;
  std::size_t patience = 10;
  std::size_t batch_size = 4;
  double lr_encoder = 2e-5;
  double lr_head = 2e-6;
  double lr_coefficients = 2e-2;
  double weight_decay = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.9;
  double eps = 1e-8;
  std::uint64_t seed = 1;
  DecodeStrategy decoding = DecodeStrategy::kMst;
  // Stop as soon as dev LAS reaches 100.
  bool stop_at_perfect_dev = false;
};

nn::AdamConfig adam_config(const TrainConfig& config);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  std::optional<double> dev_uas;
  std::optional<double> dev_las;
};

struct TrainResult {
  ModelParams params;  // best epoch by dev LAS, or the last epoch without dev data
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  std::size_t steps = 0;
};

// Raised when the loss stops being finite; carries the parameters from the
// last completed step.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& message, ModelParams last_good)
      : Error(ErrorKind::kDivergence, message), last_good_(std::move(last_good)) {}
  const ModelParams& last_good() const { return last_good_; }

 private:
  ModelParams last_good_;
};

// Mini-batch training on summed arc and label cross-entropy with early
// stopping on dev LAS.
TrainResult train(ModelParams params, std::span<const Instance> train_set,
                  std::span<const Instance> dev_set, const TrainConfig& config);

// Attachment scores (UAS, LAS) of the model on a set of instances.
std::pair<double, double> attachment_scores(const ModelParams& params,
                                            std::span<const Instance> instances,
                                            DecodeStrategy decoding = DecodeStrategy::kMst);

ArgumentTree parse_instance(const ModelParams& params, const Instance& instance,
                            DecodeStrategy decoding = DecodeStrategy::kMst);

}  // namespace discarg
