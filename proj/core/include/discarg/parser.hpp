#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "discarg/checkpoint.hpp"
#include "discarg/corpus.hpp"
#include "discarg/matrix.hpp"
#include "discarg/nnet.hpp"
#include "discarg/rst.hpp"

namespace discarg {

// BAP is the plain biaffine parser; the DBAP variants modulate arc scores
// with discourse coefficients derived from the RST adjacency (scalar, per
// label, or per label with inverted relations).
enum class Mode { kBap, kDbap5, kDbap6, kDbap7 };
enum class SegmentationMode { kGold, kEndToEnd };
enum class DecodeStrategy { kMst, kGreedy };

std::string_view to_string(Mode mode);
std::string_view to_string(SegmentationMode mode);
std::string_view to_string(DecodeStrategy strategy);
Mode parse_mode(std::string_view text);
SegmentationMode parse_segmentation(std::string_view text);
DecodeStrategy parse_decode_strategy(std::string_view text);

// Function inventory size: cc, support, attack, plus same-arg end-to-end.
std::size_t num_functions(SegmentationMode mode);

// Optimizer groups.
inline constexpr int kEncoderGroup = 0;
inline constexpr int kHeadGroup = 1;
inline constexpr int kCoefficientGroup = 2;

struct ModelConfig {
  Mode mode = Mode::kBap;
  SegmentationMode segmentation = SegmentationMode::kGold;
  std::size_t d_lm = 64;
  std::size_t arc_dim = 100;
  std::size_t tag_dim = 50;
  // Directed RST label count (twice the inventory size).
  std::size_t rst_labels = 0;
  double dropout = 0.2;
  // Standard deviation of the feedforward weights. Unit vectors are
  // unit-norm, so this is also the spread of the hidden pre-activations; with
  // the small head learning rate it sets how far scores can move per step.
  double ff_init_std = 10.0;
  // Keeps the coefficient parameters at their neutral initial value.
  bool freeze_coefficients = false;
};

struct ModelParams {
  ModelConfig config;
  nn::Parameter root;  // v_0, 1 x d_lm
  nn::FFLayer arc_parent;
  nn::FFLayer arc_dep;
  nn::FFLayer fn_parent;
  nn::FFLayer fn_dep;
  nn::Parameter u_arc;                 // (arc_dim+1) x (arc_dim+1)
  nn::Parameter b_arc;                 // 1 x 1
  std::vector<nn::Parameter> u_label;  // per function, (tag_dim+1) x (tag_dim+1)
  nn::Parameter b_label;               // 1 x |functions|
  // Coefficients. DBAP5: theta 1x1, b_rst 1x1. DBAP6: theta k x 1, b_rst.
  // DBAP7: theta (forward) and theta_inv k x 1, b_rst and b_inv.
  nn::Parameter theta;
  nn::Parameter b_rst;
  nn::Parameter theta_inv;
  nn::Parameter b_inv;

  std::vector<nn::Parameter*> parameters();
  std::vector<const nn::Parameter*> parameters() const;
};

// Feedforward layers are drawn from `seed`; the root vector v_0 is drawn
// first and stays fixed. The biaffine forms start at zero (the arc form with
// unit bias) and coefficients start neutral (C = 1) without consuming random
// draws.
ModelParams init_params(const ModelConfig& config, std::uint64_t seed);

struct ScoredParse {
  Matrix arc;           // n x (n+1) raw biaffine scores
  Matrix coefficients;  // n x (n+1), column 0 fixed to 1
  Matrix modulated;     // arc o coefficients
  std::vector<Matrix> label_scores;  // per function, n x (n+1)
};

// Symbolic forward pass shared by scoring and training.
struct ForwardVars {
  nn::Var arc;
  nn::Var coefficients;  // invalid (id < 0) for BAP
  nn::Var modulated;
  std::vector<nn::Var> labels;
};

ForwardVars forward(nn::Graph& graph, ModelParams& params, const Matrix& units,
                    const RstAdjacency* rst, bool training, std::mt19937_64* rng);

// `units` holds one row per discourse unit (n x d_lm); the root vector is
// taken from the model.
ScoredParse score(const ModelParams& params, const Matrix& units, const RstAdjacency* rst);

ArgumentTree decode(const ScoredParse& scored, const std::string& doc_id = "",
                    DecodeStrategy strategy = DecodeStrategy::kMst);

// Function argmax for one arc under the structural rules (root arcs are cc,
// other arcs never are).
ArgumentFunction best_function(const std::vector<Matrix>& label_scores, int dependent, int head);

// Summed arc and label cross-entropy of the gold tree.
nn::Var parse_loss(nn::Graph& graph, const ForwardVars& vars, const ArgumentTree& gold);

// Parse output record: {doc_id, heads, functions, roles, scores?}, where the
// arrays list units 1..n and `scores` holds the modulated n x (n+1) matrix.
std::string parse_to_json(const ArgumentTree& tree, const Matrix* scores = nullptr);
ArgumentTree parse_from_json(std::string_view json);

Checkpoint to_checkpoint(const ModelParams& params, const std::string& extra_metadata_json = "{}");
ModelParams from_checkpoint(const Checkpoint& checkpoint);

}  // namespace discarg
