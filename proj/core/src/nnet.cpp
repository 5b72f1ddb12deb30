#include "discarg/nnet.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "discarg/errors.hpp"

namespace discarg::nn {

Parameter::Parameter(std::string name_, Matrix value_, int group_)
    : name(std::move(name_)), value(std::move(value_)), group(group_) {
  zero_grad();
}

const Matrix& Var::value() const { return graph_->value(*this); }

Var Graph::constant(Matrix value) {
  if (checked_ && !value.allFinite())
    fail(ErrorKind::kNumeric, "non-finite constant entered the graph");
  Node node;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Graph::parameter(Parameter& param) {
  if (checked_ && !param.value.allFinite())
    fail(ErrorKind::kNumeric, fmt::format("parameter '{}' is not finite", param.name));
  Node node;
  node.value = param.value;
  node.needs_grad = param.trainable;
  node.param = &param;
  node.param_version = param.version;
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Graph::record(Matrix value, std::vector<int> parents, Backward fn) {
  if (checked_ && !value.allFinite())
    fail(ErrorKind::kNumeric, "operation produced a non-finite value");
  Node node;
  node.value = std::move(value);
  for (int p : parents) node.needs_grad |= nodes_[p].needs_grad;
  node.parents = std::move(parents);
  if (node.needs_grad) node.backward = std::move(fn);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

void Graph::backward(Var loss) {
  if (consumed_) fail(ErrorKind::kStaleness, "graph was already differentiated");
  for (const auto& node : nodes_)
    if (node.param && node.param->version != node.param_version)
      fail(ErrorKind::kStaleness,
           fmt::format("parameter '{}' changed after the forward pass", node.param->name));
  const Matrix& lv = value(loss);
  if (lv.rows() != 1 || lv.cols() != 1) fail(ErrorKind::kShape, "loss must be a 1 x 1 value");
  consumed_ = true;
  for (auto& node : nodes_)
    if (node.needs_grad) node.grad = Matrix::Zero(node.value.rows(), node.value.cols());
  if (!nodes_[loss.id()].needs_grad) return;
  nodes_[loss.id()].grad(0, 0) = 1.0;
  for (int id = loss.id(); id >= 0; --id) {
    Node& node = nodes_[id];
    if (!node.needs_grad) continue;
    if (node.backward) node.backward(*this, id);
    if (node.param) node.param->grad += node.grad;
  }
}

namespace {

void require(bool ok, const char* op, const Matrix& a, const Matrix& b) {
  if (!ok)
    fail(ErrorKind::kShape, fmt::format("{}: incompatible shapes {}x{} and {}x{}", op, a.rows(),
                                        a.cols(), b.rows(), b.cols()));
}

Graph& same_graph(Var a, Var b) {
  if (&a.graph() != &b.graph()) fail(ErrorKind::kArgument, "operands live in different graphs");
  return a.graph();
}

}  // namespace

Var matmul(Var a, Var b) {
  Graph& g = same_graph(a, b);
  const Matrix& x = a.value();
  const Matrix& y = b.value();
  require(x.cols() == y.rows(), "matmul", x, y);
  Matrix out = x * y;
  return g.record(std::move(out), {a.id(), b.id()}, [](Graph& g, int self) {
    const int pa = g.parent(self, 0), pb = g.parent(self, 1);
    const Matrix& up = g.grad_of(self);
    if (g.needs_grad_of(pa)) g.grad_of(pa).noalias() += up * g.value_of(pb).transpose();
    if (g.needs_grad_of(pb)) g.grad_of(pb).noalias() += g.value_of(pa).transpose() * up;
  });
}

Var add(Var a, Var b) {
  Graph& g = same_graph(a, b);
  require(a.rows() == b.rows() && a.cols() == b.cols(), "add", a.value(), b.value());
  Matrix out = a.value() + b.value();
  return g.record(std::move(out), {a.id(), b.id()}, [](Graph& g, int self) {
    for (std::size_t k = 0; k < 2; ++k) {
      const int p = g.parent(self, k);
      if (g.needs_grad_of(p)) g.grad_of(p) += g.grad_of(self);
    }
  });
}

Var add_row(Var a, Var row) {
  Graph& g = same_graph(a, row);
  require(row.rows() == 1 && row.cols() == a.cols(), "add_row", a.value(), row.value());
  Matrix out = a.value().rowwise() + row.value().row(0);
  return g.record(std::move(out), {a.id(), row.id()}, [](Graph& g, int self) {
    const int pa = g.parent(self, 0), pr = g.parent(self, 1);
    if (g.needs_grad_of(pa)) g.grad_of(pa) += g.grad_of(self);
    if (g.needs_grad_of(pr)) g.grad_of(pr) += g.grad_of(self).colwise().sum();
  });
}

Var add_scalar(Var a, Var scalar) {
  Graph& g = same_graph(a, scalar);
  require(scalar.rows() == 1 && scalar.cols() == 1, "add_scalar", a.value(), scalar.value());
  Matrix out = a.value().array() + scalar.value()(0, 0);
  return g.record(std::move(out), {a.id(), scalar.id()}, [](Graph& g, int self) {
    const int pa = g.parent(self, 0), ps = g.parent(self, 1);
    if (g.needs_grad_of(pa)) g.grad_of(pa) += g.grad_of(self);
    if (g.needs_grad_of(ps)) g.grad_of(ps)(0, 0) += g.grad_of(self).sum();
  });
}

Var scale(Var a, Var scalar) {
  Graph& g = same_graph(a, scalar);
  require(scalar.rows() == 1 && scalar.cols() == 1, "scale", a.value(), scalar.value());
  Matrix out = a.value() * scalar.value()(0, 0);
  return g.record(std::move(out), {a.id(), scalar.id()}, [](Graph& g, int self) {
    const int pa = g.parent(self, 0), ps = g.parent(self, 1);
    const Matrix& up = g.grad_of(self);
    if (g.needs_grad_of(pa)) g.grad_of(pa) += up * g.value_of(ps)(0, 0);
    if (g.needs_grad_of(ps)) g.grad_of(ps)(0, 0) += up.cwiseProduct(g.value_of(pa)).sum();
  });
}

Var hadamard(Var a, Var b) {
  Graph& g = same_graph(a, b);
  require(a.rows() == b.rows() && a.cols() == b.cols(), "hadamard", a.value(), b.value());
  Matrix out = a.value().cwiseProduct(b.value());
  return g.record(std::move(out), {a.id(), b.id()}, [](Graph& g, int self) {
    const int pa = g.parent(self, 0), pb = g.parent(self, 1);
    const Matrix& up = g.grad_of(self);
    if (g.needs_grad_of(pa)) g.grad_of(pa) += up.cwiseProduct(g.value_of(pb));
    if (g.needs_grad_of(pb)) g.grad_of(pb) += up.cwiseProduct(g.value_of(pa));
  });
}

Var relu(Var a) {
  Matrix out = a.value().cwiseMax(0.0);
  return a.graph().record(std::move(out), {a.id()}, [](Graph& g, int self) {
    const int pa = g.parent(self, 0);
    if (!g.needs_grad_of(pa)) return;
    const Matrix& x = g.value_of(pa);
    g.grad_of(pa) += (x.array() > 0.0).select(g.grad_of(self), 0.0).matrix();
  });
}

Var dropout(Var a, double rate, std::mt19937_64& rng, bool training) {
  if (rate < 0.0 || rate >= 1.0)
    fail(ErrorKind::kArgument, fmt::format("dropout rate {} outside [0, 1)", rate));
  if (!training || rate == 0.0) return a;
  std::bernoulli_distribution keep(1.0 - rate);
  Matrix mask(a.rows(), a.cols());
  const double factor = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < mask.size(); ++i) mask.data()[i] = keep(rng) ? factor : 0.0;
  Matrix out = a.value().cwiseProduct(mask);
  return a.graph().record(std::move(out), {a.id()},
                          [mask = std::move(mask)](Graph& g, int self) {
                            const int pa = g.parent(self, 0);
                            if (g.needs_grad_of(pa)) g.grad_of(pa) += g.grad_of(self).cwiseProduct(mask);
                          });
}

Var append_ones_col(Var a) {
  Matrix out(a.rows(), a.cols() + 1);
  out.leftCols(a.cols()) = a.value();
  out.col(a.cols()).setOnes();
  return a.graph().record(std::move(out), {a.id()}, [](Graph& g, int self) {
    const int pa = g.parent(self, 0);
    if (g.needs_grad_of(pa)) g.grad_of(pa) += g.grad_of(self).leftCols(g.value_of(pa).cols());
  });
}

Var transpose(Var a) {
  Matrix out = a.value().transpose();
  return a.graph().record(std::move(out), {a.id()}, [](Graph& g, int self) {
    const int pa = g.parent(self, 0);
    if (g.needs_grad_of(pa)) g.grad_of(pa) += g.grad_of(self).transpose();
  });
}

Var slice_rows(Var a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.rows())
    fail(ErrorKind::kShape, fmt::format("slice_rows [{}, {}) outside {} rows", start,
                                        start + count, a.rows()));
  Matrix out = a.value().middleRows(start, count);
  return a.graph().record(std::move(out), {a.id()}, [start, count](Graph& g, int self) {
    const int pa = g.parent(self, 0);
    if (g.needs_grad_of(pa)) g.grad_of(pa).middleRows(start, count) += g.grad_of(self);
  });
}

Var reshape(Var a, Eigen::Index rows, Eigen::Index cols) {
  if (rows * cols != a.value().size())
    fail(ErrorKind::kShape, fmt::format("cannot reshape {}x{} into {}x{}", a.rows(), a.cols(),
                                        rows, cols));
  Matrix out = Eigen::Map<const Matrix>(a.value().data(), rows, cols);
  return a.graph().record(std::move(out), {a.id()}, [](Graph& g, int self) {
    const int pa = g.parent(self, 0);
    if (!g.needs_grad_of(pa)) return;
    Matrix& target = g.grad_of(pa);
    Eigen::Map<Matrix>(target.data(), g.grad_of(self).rows(), g.grad_of(self).cols()) +=
        g.grad_of(self);
  });
}

Var hconcat(Var a, Var b) {
  Graph& g = same_graph(a, b);
  require(a.rows() == b.rows(), "hconcat", a.value(), b.value());
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a.value(), b.value();
  return g.record(std::move(out), {a.id(), b.id()}, [](Graph& g, int self) {
    const int pa = g.parent(self, 0), pb = g.parent(self, 1);
    const Eigen::Index ca = g.value_of(pa).cols();
    const Eigen::Index cb = g.value_of(pb).cols();
    if (g.needs_grad_of(pa)) g.grad_of(pa) += g.grad_of(self).leftCols(ca);
    if (g.needs_grad_of(pb)) g.grad_of(pb) += g.grad_of(self).rightCols(cb);
  });
}

Var vconcat(Var a, Var b) {
  Graph& g = same_graph(a, b);
  require(a.cols() == b.cols(), "vconcat", a.value(), b.value());
  Matrix out(a.rows() + b.rows(), a.cols());
  out << a.value(), b.value();
  return g.record(std::move(out), {a.id(), b.id()}, [](Graph& g, int self) {
    const int pa = g.parent(self, 0), pb = g.parent(self, 1);
    const Eigen::Index ra = g.value_of(pa).rows();
    const Eigen::Index rb = g.value_of(pb).rows();
    if (g.needs_grad_of(pa)) g.grad_of(pa) += g.grad_of(self).topRows(ra);
    if (g.needs_grad_of(pb)) g.grad_of(pb) += g.grad_of(self).bottomRows(rb);
  });
}

Var gather(Var a, std::vector<std::pair<Eigen::Index, Eigen::Index>> cells) {
  Matrix out(static_cast<Eigen::Index>(cells.size()), 1);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto [r, c] = cells[k];
    if (r < 0 || c < 0 || r >= a.rows() || c >= a.cols())
      fail(ErrorKind::kShape, fmt::format("gather cell ({}, {}) outside {}x{}", r, c, a.rows(),
                                          a.cols()));
    out(static_cast<Eigen::Index>(k), 0) = a.value()(r, c);
  }
  return a.graph().record(std::move(out), {a.id()},
                          [cells = std::move(cells)](Graph& g, int self) {
                            const int pa = g.parent(self, 0);
                            if (!g.needs_grad_of(pa)) return;
                            for (std::size_t k = 0; k < cells.size(); ++k)
                              g.grad_of(pa)(cells[k].first, cells[k].second) +=
                                  g.grad_of(self)(static_cast<Eigen::Index>(k), 0);
                          });
}

Var sum(Var a) {
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  return a.graph().record(std::move(out), {a.id()}, [](Graph& g, int self) {
    const int pa = g.parent(self, 0);
    if (g.needs_grad_of(pa)) g.grad_of(pa).array() += g.grad_of(self)(0, 0);
  });
}

Var softmax_xent(Var scores, std::vector<int> gold, const Mask* mask) {
  const Matrix& s = scores.value();
  if (static_cast<Eigen::Index>(gold.size()) != s.rows())
    fail(ErrorKind::kShape, fmt::format("softmax_xent: {} gold labels for {} rows", gold.size(),
                                        s.rows()));
  if (mask && (mask->rows() != s.rows() || mask->cols() != s.cols()))
    fail(ErrorKind::kShape, "softmax_xent: mask shape differs from scores");
  Matrix probs = Matrix::Zero(s.rows(), s.cols());
  double loss = 0.0;
  for (Eigen::Index r = 0; r < s.rows(); ++r) {
    const int y = gold[r];
    if (y < 0) continue;
    if (y >= s.cols() || (mask && !(*mask)(r, y)))
      fail(ErrorKind::kArgument, fmt::format("gold index {} of row {} is not admissible", y, r));
    double peak = -std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < s.cols(); ++c)
      if (!mask || (*mask)(r, c)) peak = std::max(peak, s(r, c));
    double z = 0.0;
    for (Eigen::Index c = 0; c < s.cols(); ++c)
      if (!mask || (*mask)(r, c)) {
        probs(r, c) = std::exp(s(r, c) - peak);
        z += probs(r, c);
      }
    probs.row(r) /= z;
    loss += -(s(r, y) - peak - std::log(z));
  }
  Matrix out(1, 1);
  out(0, 0) = loss;
  return scores.graph().record(
      std::move(out), {scores.id()},
      [probs = std::move(probs), gold = std::move(gold)](Graph& g, int self) {
        const int ps = g.parent(self, 0);
        if (!g.needs_grad_of(ps)) return;
        const double up = g.grad_of(self)(0, 0);
        Matrix& target = g.grad_of(ps);
        for (Eigen::Index r = 0; r < probs.rows(); ++r) {
          if (gold[r] < 0) continue;
          target.row(r) += up * probs.row(r);
          target(r, gold[r]) -= up;
        }
      });
}

FFLayer make_ff_layer(const std::string& name, Eigen::Index d_in, Eigen::Index d_out,
                      Activation activation, int group, std::mt19937_64& rng,
                      double limit) {
  if (limit <= 0.0) limit = std::sqrt(6.0 / static_cast<double>(d_in + d_out));
  std::uniform_real_distribution<double> uniform(-limit, limit);
  Matrix w(d_in, d_out);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = uniform(rng);
  FFLayer layer;
  layer.weight = Parameter(name + ".weight", std::move(w), group);
  layer.bias = Parameter(name + ".bias", Matrix::Zero(1, d_out), group);
  layer.activation = activation;
  return layer;
}

Var ff_forward(Graph& g, FFLayer& layer, Var x) {
  Var h = add_row(matmul(x, g.parameter(layer.weight)), g.parameter(layer.bias));
  return layer.activation == Activation::kRelu ? relu(h) : h;
}

Matrix ff_forward(const FFLayer& layer, const Matrix& x) {
  if (x.cols() != layer.weight.value.rows())
    fail(ErrorKind::kShape, fmt::format("ff_forward: input has {} columns, layer expects {}",
                                        x.cols(), layer.weight.value.rows()));
  Matrix h = (x * layer.weight.value).rowwise() + layer.bias.value.row(0);
  if (layer.activation == Activation::kRelu) h = h.cwiseMax(0.0);
  return h;
}

Var bilinear_scores(Var dependents, Var parents, Var u, Var b) {
  if (dependents.cols() != parents.cols())
    fail(ErrorKind::kShape, "bilinear_scores: parent and dependent widths differ");
  if (u.rows() != dependents.cols() + 1 || u.cols() != parents.cols() + 1)
    fail(ErrorKind::kShape, "bilinear_scores: U must be (d+1) x (d+1)");
  Var left = matmul(append_ones_col(dependents), u);
  Var scores = matmul(left, transpose(append_ones_col(parents)));
  return add_scalar(scores, b);
}

Matrix bilinear_scores(const Matrix& parents, const Matrix& dependents, const Matrix& u,
                       double b) {
  Graph g(false);
  Matrix bias(1, 1);
  bias(0, 0) = b;
  Var s = bilinear_scores(g.constant(dependents), g.constant(parents), g.constant(u),
                          g.constant(bias));
  return s.value();
}

XentResult softmax_xent(const Vector& scores, int gold) {
  if (gold < 0 || gold >= scores.size())
    fail(ErrorKind::kArgument, fmt::format("gold index {} outside {} classes", gold, scores.size()));
  const double peak = scores.maxCoeff();
  const Vector e = (scores.array() - peak).exp();
  const double z = e.sum();
  XentResult out;
  out.loss = -(scores(gold) - peak - std::log(z));
  out.grad = e / z;
  out.grad(gold) -= 1.0;
  return out;
}

Matrix dropout(const Matrix& x, double rate, std::uint64_t seed, bool training) {
  Graph g(false);
  std::mt19937_64 rng(seed);
  return dropout(g.constant(x), rate, rng, training).value();
}

}  // namespace discarg::nn
