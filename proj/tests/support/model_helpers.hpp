#pragma once

// Random model inputs shared by the parser tests and the acceptance suite.

#include <random>

#include "discarg/parser.hpp"
#include "discarg/rst.hpp"
#include "oracles.hpp"

namespace discarg::test_support {

inline const RelationInventory& inventory() { return RelationInventory::builtin(Language::kEn); }

inline ModelConfig small_config(Mode mode, SegmentationMode seg = SegmentationMode::kGold) {
  ModelConfig c;
  c.mode = mode;
  c.segmentation = seg;
  c.d_lm = 16;
  c.arc_dim = 12;
  c.tag_dim = 8;
  c.rst_labels = inventory().k();
  c.dropout = 0.0;
  return c;
}

// Unit-norm random rows, like encoder output.
inline Matrix random_units(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(n, d);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  for (Eigen::Index r = 0; r < m.rows(); ++r) m.row(r).normalize();
  return m;
}

inline RstAdjacency random_rst(std::mt19937_64& rng, std::size_t n) {
  const ArgumentTree shape = oracle::random_tree(rng, n);
  RstDependencies deps;
  deps.heads = shape.heads;
  deps.relations.resize(n + 1);
  deps.nuclearity.assign(n + 1, Nuclearity::kSatellite);
  std::uniform_int_distribution<std::size_t> label(0, inventory().labels.size() - 1);
  for (std::size_t i = 1; i <= n; ++i) {
    deps.relations[i].label = inventory().labels[label(rng)];
    deps.relations[i].direction = std::bernoulli_distribution(0.3)(rng)
                                      ? RelationDirection::kInverted
                                      : RelationDirection::kForward;
  }
  return adjacency(deps, inventory(), n);
}

// Moves every parameter away from its structured initial value so that a
// gradient check exercises all paths, keeping coefficients positive.
inline void randomize(ModelParams& p, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 0.4);
  std::uniform_real_distribution<double> positive(0.2, 1.0);
  for (nn::Parameter* param : p.parameters()) {
    const bool coefficient = param->group == kCoefficientGroup;
    for (Eigen::Index i = 0; i < param->value.size(); ++i)
      param->value.data()[i] = coefficient ? positive(rng) : g(rng);
  }
}

// Max relative error of the full parse loss against central differences.
inline double full_loss_gradient_error(std::uint64_t seed, Mode mode = Mode::kDbap7) {
  std::mt19937_64 rng(seed);
  const std::size_t n = 2 + seed % 4;  // 2..5 units
  const auto seg = seed % 2 ? SegmentationMode::kEndToEnd : SegmentationMode::kGold;
  ModelParams params = init_params(small_config(mode, seg), seed);
  randomize(params, rng);
  const Matrix units = random_units(rng, n, 16);
  const RstAdjacency rst = random_rst(rng, n);
  const ArgumentTree gold = oracle::random_tree(rng, n, seg == SegmentationMode::kEndToEnd);
  std::vector<nn::Parameter*> trainable;
  for (nn::Parameter* p : params.parameters())
    if (p->trainable) trainable.push_back(p);
  const bool uses_rst = mode != Mode::kBap;
  const auto loss = [&](bool backward) {
    nn::Graph g;
    const ForwardVars vars = forward(g, params, units, uses_rst ? &rst : nullptr, false, nullptr);
    nn::Var l = parse_loss(g, vars, gold);
    if (backward) g.backward(l);
    return l.value()(0, 0);
  };
  return oracle::check_gradients(trainable, loss, 1e-5, 6, seed).max_relative_error;
}

}  // namespace discarg::test_support
