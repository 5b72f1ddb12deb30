#include "discarg/parser.hpp"

#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "discarg/decoder.hpp"
#include "discarg/encoder.hpp"
#include "discarg/errors.hpp"
#include "discarg/roles.hpp"

namespace discarg {

namespace {

constexpr std::string_view kFunctionNames[] = {"cc", "support", "attack", "same-arg"};

nn::Parameter scalar_param(const std::string& name, double value, int group) {
  return nn::Parameter(name, Matrix::Constant(1, 1, value), group);
}

bool has_param(const nn::Parameter& p) { return p.value.size() > 0; }

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kBap: return "bap";
    case Mode::kDbap5: return "dbap5";
    case Mode::kDbap6: return "dbap6";
    case Mode::kDbap7: return "dbap7";
  }
  return "?";
}

std::string_view to_string(SegmentationMode mode) {
  return mode == SegmentationMode::kGold ? "gold" : "e2e";
}

std::string_view to_string(DecodeStrategy strategy) {
  return strategy == DecodeStrategy::kMst ? "mst" : "greedy";
}

Mode parse_mode(std::string_view text) {
  for (Mode m : {Mode::kBap, Mode::kDbap5, Mode::kDbap6, Mode::kDbap7})
    if (to_string(m) == text) return m;
  fail(ErrorKind::kArgument, fmt::format("unknown mode '{}'", text));
}

SegmentationMode parse_segmentation(std::string_view text) {
  if (text == "gold") return SegmentationMode::kGold;
  if (text == "e2e") return SegmentationMode::kEndToEnd;
  fail(ErrorKind::kArgument, fmt::format("unknown segmentation '{}'", text));
}

DecodeStrategy parse_decode_strategy(std::string_view text) {
  if (text == "mst") return DecodeStrategy::kMst;
  if (text == "greedy") return DecodeStrategy::kGreedy;
  fail(ErrorKind::kArgument, fmt::format("unknown decoding strategy '{}'", text));
}

std::size_t num_functions(SegmentationMode mode) {
  return mode == SegmentationMode::kGold ? 3 : 4;
}

std::vector<nn::Parameter*> ModelParams::parameters() {
  std::vector<nn::Parameter*> out = {&root,
                                     &arc_parent.weight, &arc_parent.bias,
                                     &arc_dep.weight,    &arc_dep.bias,
                                     &fn_parent.weight,  &fn_parent.bias,
                                     &fn_dep.weight,     &fn_dep.bias,
                                     &u_arc,             &b_arc};
  for (auto& u : u_label) out.push_back(&u);
  out.push_back(&b_label);
  for (nn::Parameter* p : {&theta, &b_rst, &theta_inv, &b_inv})
    if (has_param(*p)) out.push_back(p);
  return out;
}

std::vector<const nn::Parameter*> ModelParams::parameters() const {
  std::vector<const nn::Parameter*> out;
  for (nn::Parameter* p : const_cast<ModelParams*>(this)->parameters()) out.push_back(p);
  return out;
}

ModelParams init_params(const ModelConfig& config, std::uint64_t seed) {
  if (config.d_lm == 0 || config.arc_dim == 0 || config.tag_dim == 0)
    fail(ErrorKind::kArgument, "model dimensions must be positive");
  if (!(config.ff_init_std > 0.0))
    fail(ErrorKind::kArgument, "feedforward init scale must be positive");
  if (config.mode != Mode::kBap && config.mode != Mode::kDbap5 && config.rst_labels == 0)
    fail(ErrorKind::kArgument, "label-aware coefficients need a relation inventory");
  const auto d = static_cast<Eigen::Index>(config.d_lm);
  const auto a = static_cast<Eigen::Index>(config.arc_dim);
  const auto t = static_cast<Eigen::Index>(config.tag_dim);
  std::mt19937_64 rng(seed);
  ModelParams p;
  p.config = config;

  std::uniform_real_distribution<double> small(-0.1, 0.1);
  Matrix root(1, d);
  for (Eigen::Index i = 0; i < d; ++i) root(0, i) = small(rng);
  p.root = nn::Parameter("root", std::move(root), kEncoderGroup);
  p.root.trainable = false;

  // Uniform weights with standard deviation `ff_init_std`.
  const double limit = std::sqrt(3.0) * config.ff_init_std;
  using nn::Activation;
  p.arc_parent = nn::make_ff_layer("arc_parent", d, a, Activation::kRelu, kHeadGroup, rng, limit);
  p.arc_dep = nn::make_ff_layer("arc_dep", d, a, Activation::kRelu, kHeadGroup, rng, limit);
  p.fn_parent = nn::make_ff_layer("fn_parent", d, t, Activation::kRelu, kHeadGroup, rng, limit);
  p.fn_dep = nn::make_ff_layer("fn_dep", d, t, Activation::kRelu, kHeadGroup, rng, limit);
  p.u_arc = nn::Parameter("u_arc", Matrix::Zero(a + 1, a + 1), kHeadGroup);
  p.b_arc = scalar_param("b_arc", 1.0, kHeadGroup);
  const std::size_t f = num_functions(config.segmentation);
  for (std::size_t i = 0; i < f; ++i)
    p.u_label.emplace_back(fmt::format("u_label.{}", kFunctionNames[i]),
                           Matrix::Zero(t + 1, t + 1), kHeadGroup);
  p.b_label = nn::Parameter("b_label", Matrix::Zero(1, static_cast<Eigen::Index>(f)), kHeadGroup);

  const auto k = static_cast<Eigen::Index>(config.rst_labels);
  switch (config.mode) {
    case Mode::kBap:
      break;
    case Mode::kDbap5:
      p.theta = scalar_param("theta", 0.0, kCoefficientGroup);
      p.b_rst = scalar_param("b_rst", 1.0, kCoefficientGroup);
      break;
    case Mode::kDbap6:
      p.theta = nn::Parameter("theta", Matrix::Zero(k, 1), kCoefficientGroup);
      p.b_rst = scalar_param("b_rst", 1.0, kCoefficientGroup);
      break;
    case Mode::kDbap7:
      p.theta = nn::Parameter("theta", Matrix::Zero(k, 1), kCoefficientGroup);
      p.b_rst = scalar_param("b_rst", 0.5, kCoefficientGroup);
      p.theta_inv = nn::Parameter("theta_inv", Matrix::Zero(k, 1), kCoefficientGroup);
      p.b_inv = scalar_param("b_inv", 0.5, kCoefficientGroup);
      break;
  }
  if (config.freeze_coefficients)
    for (nn::Parameter* c : {&p.theta, &p.b_rst, &p.theta_inv, &p.b_inv}) c->trainable = false;
  return p;
}

ForwardVars forward(nn::Graph& g, ModelParams& p, const Matrix& units, const RstAdjacency* rst,
                    bool training, std::mt19937_64* rng) {
  const ModelConfig& cfg = p.config;
  const Eigen::Index n = units.rows();
  if (n == 0) fail(ErrorKind::kArgument, "document has no units");
  if (units.cols() != static_cast<Eigen::Index>(cfg.d_lm))
    fail(ErrorKind::kShape, fmt::format("unit vectors have dimension {}, model expects {}",
                                        units.cols(), cfg.d_lm));
  if (training && !rng) fail(ErrorKind::kArgument, "training forward pass needs a generator");
  std::mt19937_64 unused;
  std::mt19937_64& gen = rng ? *rng : unused;
  const double rate = cfg.dropout;

  nn::Var v = nn::dropout(nn::vconcat(g.parameter(p.root), g.constant(units)), rate, gen, training);
  nn::Var dep_in = nn::slice_rows(v, 1, n);
  nn::Var hp = nn::dropout(nn::ff_forward(g, p.arc_parent, v), rate, gen, training);
  nn::Var hd = nn::dropout(nn::ff_forward(g, p.arc_dep, dep_in), rate, gen, training);
  nn::Var fp = nn::dropout(nn::ff_forward(g, p.fn_parent, v), rate, gen, training);
  nn::Var fd = nn::dropout(nn::ff_forward(g, p.fn_dep, dep_in), rate, gen, training);

  ForwardVars out;
  out.arc = nn::bilinear_scores(hd, hp, g.parameter(p.u_arc), g.parameter(p.b_arc));
  nn::Var label_bias = nn::transpose(g.parameter(p.b_label));
  for (std::size_t f = 0; f < p.u_label.size(); ++f)
    out.labels.push_back(nn::bilinear_scores(
        fd, fp, g.parameter(p.u_label[f]),
        nn::slice_rows(label_bias, static_cast<Eigen::Index>(f), 1)));

  if (cfg.mode == Mode::kBap) {
    out.modulated = out.arc;
    return out;
  }
  if (!rst) fail(ErrorKind::kArgument, "discourse-aware modes need RST dependencies");
  if (static_cast<Eigen::Index>(rst->n) != n)
    fail(ErrorKind::kAlignment,
         fmt::format("RST adjacency covers {} units but the document has {}", rst->n, n));
  const auto expect_k = static_cast<Eigen::Index>(cfg.rst_labels);
  if (cfg.mode != Mode::kDbap5 && rst->full.cols() != expect_k)
    fail(ErrorKind::kShape, fmt::format("RST adjacency has {} labels, model expects {}",
                                        rst->full.cols(), expect_k));

  nn::Var core;
  switch (cfg.mode) {
    case Mode::kDbap5:
      core = nn::add_scalar(nn::scale(g.constant(rst->adj), g.parameter(p.theta)),
                            g.parameter(p.b_rst));
      break;
    case Mode::kDbap6:
      core = nn::reshape(nn::relu(nn::add_scalar(nn::matmul(g.constant(rst->full),
                                                            g.parameter(p.theta)),
                                                 g.parameter(p.b_rst))),
                         n, n);
      break;
    case Mode::kDbap7: {
      nn::Var fwd = nn::relu(
          nn::add_scalar(nn::matmul(g.constant(rst->full), g.parameter(p.theta)),
                         g.parameter(p.b_rst)));
      nn::Var inv = nn::relu(
          nn::add_scalar(nn::matmul(g.constant(rst->inverted), g.parameter(p.theta_inv)),
                         g.parameter(p.b_inv)));
      core = nn::reshape(nn::add(fwd, inv), n, n);
      break;
    }
    case Mode::kBap:
      break;
  }
  out.coefficients = nn::hconcat(g.constant(Matrix::Ones(n, 1)), core);
  if ((cfg.mode == Mode::kDbap6 || cfg.mode == Mode::kDbap7) &&
      out.coefficients.value().minCoeff() < 0.0)
    fail(ErrorKind::kNumeric, "negative discourse coefficient");
  out.modulated = nn::hadamard(out.arc, out.coefficients);
  return out;
}

ScoredParse score(const ModelParams& params, const Matrix& units, const RstAdjacency* rst) {
  nn::Graph g;
  // The forward pass only reads parameter values.
  auto& mutable_params = const_cast<ModelParams&>(params);
  ForwardVars vars = forward(g, mutable_params, units, rst, false, nullptr);
  ScoredParse out;
  out.arc = vars.arc.value();
  out.modulated = vars.modulated.value();
  out.coefficients = vars.coefficients.id() >= 0 ? vars.coefficients.value()
                                                 : Matrix::Ones(out.arc.rows(), out.arc.cols());
  for (const auto& l : vars.labels) out.label_scores.push_back(l.value());
  return out;
}

ArgumentFunction best_function(const std::vector<Matrix>& label_scores, int dependent, int head) {
  if (head == 0) return ArgumentFunction::kCc;
  std::size_t best = 1;
  for (std::size_t f = 2; f < label_scores.size(); ++f)
    if (label_scores[f](dependent - 1, head) > label_scores[best](dependent - 1, head)) best = f;
  return static_cast<ArgumentFunction>(best);
}

ArgumentTree decode(const ScoredParse& scored, const std::string& doc_id,
                    DecodeStrategy strategy) {
  const std::size_t n = static_cast<std::size_t>(scored.modulated.rows());
  ArgumentTree tree = ArgumentTree::with_size(doc_id, n);
  tree.heads = strategy == DecodeStrategy::kMst ? decode_mst(scored.modulated)
                                                : decode_greedy(scored.modulated);
  for (std::size_t i = 1; i <= n; ++i)
    tree.functions[i] = best_function(scored.label_scores, static_cast<int>(i), tree.heads[i]);
  if (is_single_root_tree(tree.heads)) tree = infer_roles(std::move(tree));
  return tree;
}

nn::Var parse_loss(nn::Graph& /*graph*/, const ForwardVars& vars, const ArgumentTree& gold) {
  const Eigen::Index n = vars.modulated.rows();
  if (static_cast<Eigen::Index>(gold.size()) != n)
    fail(ErrorKind::kAlignment,
         fmt::format("gold tree '{}' has {} units, scores cover {}", gold.doc_id, gold.size(), n));
  if (!gold.has_functions()) fail(ErrorKind::kArgument, "gold tree has no functions");
  nn::Mask arc_mask = nn::Mask::Constant(n, n + 1, true);
  std::vector<int> heads(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    arc_mask(i, i + 1) = false;
    heads[static_cast<std::size_t>(i)] = gold.heads[static_cast<std::size_t>(i) + 1];
  }
  nn::Var arc_loss = nn::softmax_xent(vars.modulated, heads, &arc_mask);

  const auto f = static_cast<Eigen::Index>(vars.labels.size());
  std::vector<std::pair<Eigen::Index, Eigen::Index>> cells;
  for (Eigen::Index i = 0; i < n; ++i) cells.emplace_back(i, heads[static_cast<std::size_t>(i)]);
  nn::Var table = nn::gather(vars.labels[0], cells);
  for (Eigen::Index k = 1; k < f; ++k) table = nn::hconcat(table, nn::gather(vars.labels[k], cells));
  nn::Mask label_mask = nn::Mask::Constant(n, f, true);
  std::vector<int> functions(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool root_arc = heads[static_cast<std::size_t>(i)] == 0;
    for (Eigen::Index k = 0; k < f; ++k) label_mask(i, k) = root_arc ? k == 0 : k != 0;
    const int gf = static_cast<int>(gold.functions[static_cast<std::size_t>(i) + 1]);
    if (gf >= f)
      fail(ErrorKind::kArgument,
           fmt::format("gold function '{}' is outside the model's inventory",
                       to_string(gold.functions[static_cast<std::size_t>(i) + 1])));
    functions[static_cast<std::size_t>(i)] = gf;
  }
  nn::Var label_loss = nn::softmax_xent(table, functions, &label_mask);
  return nn::add(arc_loss, label_loss);
}

std::string parse_to_json(const ArgumentTree& tree, const Matrix* scores) {
  nlohmann::ordered_json out;
  out["doc_id"] = tree.doc_id;
  std::vector<int> heads(tree.heads.begin() + 1, tree.heads.end());
  out["heads"] = heads;
  auto functions = nlohmann::ordered_json::array();
  for (std::size_t i = 1; i < tree.functions.size(); ++i)
    functions.push_back(std::string(to_string(tree.functions[i])));
  out["functions"] = functions;
  auto roles = nlohmann::ordered_json::array();
  if (tree.has_roles())
    for (std::size_t i = 1; i < tree.roles.size(); ++i) roles.push_back(std::string(to_string(tree.roles[i])));
  out["roles"] = roles;
  if (scores) {
    auto rows = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < scores->rows(); ++r) {
      std::vector<double> row(scores->cols());
      for (Eigen::Index c = 0; c < scores->cols(); ++c) row[c] = (*scores)(r, c);
      rows.push_back(row);
    }
    out["scores"] = rows;
  }
  return out.dump(2);
}

ArgumentTree parse_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto heads = j.at("heads").get<std::vector<int>>();
    const auto functions = j.at("functions").get<std::vector<std::string>>();
    if (functions.size() != heads.size())
      fail(ErrorKind::kFormat, "parse record has mismatched heads and functions");
    ArgumentTree tree = ArgumentTree::with_size(j.at("doc_id").get<std::string>(), heads.size());
    for (std::size_t i = 0; i < heads.size(); ++i) {
      tree.heads[i + 1] = heads[i];
      tree.functions[i + 1] = parse_function(functions[i]);
    }
    const auto roles = j.value("roles", std::vector<std::string>{});
    if (!roles.empty()) {
      if (roles.size() != heads.size()) fail(ErrorKind::kFormat, "parse record has mismatched roles");
      tree.roles.assign(heads.size() + 1, Role::kPro);
      for (std::size_t i = 0; i < roles.size(); ++i) tree.roles[i + 1] = parse_role(roles[i]);
    }
    validate_heads(tree.heads);
    return tree;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, fmt::format("invalid parse record: {}", e.what()));
  }
}

Checkpoint to_checkpoint(const ModelParams& params, const std::string& extra_metadata_json) {
  using nlohmann::ordered_json;
  ordered_json meta = ordered_json::parse(extra_metadata_json);
  const ModelConfig& c = params.config;
  meta["model"] = {{"mode", to_string(c.mode)},
                   {"segmentation", to_string(c.segmentation)},
                   {"d_lm", c.d_lm},
                   {"arc_dim", c.arc_dim},
                   {"tag_dim", c.tag_dim},
                   {"rst_labels", c.rst_labels},
                   {"dropout", c.dropout},
                   {"ff_init_std", c.ff_init_std},
                   {"freeze_coefficients", c.freeze_coefficients}};
  Checkpoint out;
  out.metadata_json = meta.dump();
  for (const nn::Parameter* p : params.parameters()) out.tensors.push_back({p->name, p->value});
  return out;
}

ModelParams from_checkpoint(const Checkpoint& checkpoint) {
  ModelConfig c;
  try {
    const auto meta = nlohmann::json::parse(checkpoint.metadata_json);
    const auto& m = meta.at("model");
    c.mode = parse_mode(m.at("mode").get<std::string>());
    c.segmentation = parse_segmentation(m.at("segmentation").get<std::string>());
    c.d_lm = m.at("d_lm").get<std::size_t>();
    c.arc_dim = m.at("arc_dim").get<std::size_t>();
    c.tag_dim = m.at("tag_dim").get<std::size_t>();
    c.rst_labels = m.at("rst_labels").get<std::size_t>();
    c.dropout = m.at("dropout").get<double>();
    c.ff_init_std = m.at("ff_init_std").get<double>();
    c.freeze_coefficients = m.at("freeze_coefficients").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kFormat, fmt::format("checkpoint metadata is invalid: {}", e.what()));
  }
  ModelParams params = init_params(c, 0);
  for (nn::Parameter* p : params.parameters()) {
    const NamedTensor* t = checkpoint.find(p->name);
    if (!t) fail(ErrorKind::kFormat, fmt::format("checkpoint lacks tensor '{}'", p->name));
    if (t->value.rows() != p->value.rows() || t->value.cols() != p->value.cols())
      fail(ErrorKind::kShape, fmt::format("tensor '{}' is {}x{}, expected {}x{}", p->name,
                                          t->value.rows(), t->value.cols(), p->value.rows(),
                                          p->value.cols()));
    p->value = t->value;
    p->zero_grad();
  }
  return params;
}

}  // namespace discarg
