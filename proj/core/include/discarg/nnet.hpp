#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "discarg/matrix.hpp"

namespace discarg::nn {

// A trainable tensor. `version` increases on every in-place update so that
// graphs recorded before the update can detect that they are stale.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;
  int group = 0;
  bool trainable = true;
  std::uint64_t version = 0;

  Parameter() = default;
  Parameter(std::string name, Matrix value, int group = 0);

  void zero_grad() { grad = Matrix::Zero(value.rows(), value.cols()); }
};

class Graph;

// Handle to a node of a Graph.
class Var {
 public:
  Var() = default;
  Var(Graph* graph, int id) : graph_(graph), id_(id) {}

  Graph& graph() const { return *graph_; }
  int id() const { return id_; }
  const Matrix& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }

 private:
  Graph* graph_ = nullptr;
  int id_ = -1;
};

// Boolean mask over a score matrix; true marks an admissible entry.
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Tape of dense operations. Values are computed eagerly; backward() walks the
// tape in reverse and accumulates into each Parameter's grad.
class Graph {
 public:
  using Backward = std::function<void(Graph&, int self)>;

  explicit Graph(bool checked = true) : checked_(checked) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var constant(Matrix value);
  Var parameter(Parameter& param);

  const Matrix& value(Var v) const { return nodes_[v.id()].value; }
  const Matrix& grad(Var v) const { return nodes_[v.id()].grad; }
  bool needs_grad(Var v) const { return nodes_[v.id()].needs_grad; }
  std::size_t size() const { return nodes_.size(); }

  void backward(Var loss);

  // Used by operations.
  Var record(Matrix value, std::vector<int> parents, Backward fn);
  Matrix& grad_of(int id) { return nodes_[id].grad; }
  const Matrix& value_of(int id) const { return nodes_[id].value; }
  bool needs_grad_of(int id) const { return nodes_[id].needs_grad; }
  int parent(int id, std::size_t k) const { return nodes_[id].parents[k]; }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    std::vector<int> parents;
    Backward backward;
    bool needs_grad = false;
    Parameter* param = nullptr;
    std::uint64_t param_version = 0;
  };

  std::vector<Node> nodes_;
  bool checked_ = true;
  bool consumed_ = false;
};

Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var add_row(Var a, Var row);          // broadcast a 1 x c row over a
Var add_scalar(Var a, Var scalar);    // scalar is 1 x 1
Var scale(Var a, Var scalar);         // a * scalar, scalar is 1 x 1
Var hadamard(Var a, Var b);
Var relu(Var a);
Var dropout(Var a, double rate, std::mt19937_64& rng, bool training);
Var append_ones_col(Var a);
Var transpose(Var a);
Var slice_rows(Var a, Eigen::Index start, Eigen::Index count);
Var reshape(Var a, Eigen::Index rows, Eigen::Index cols);
Var hconcat(Var a, Var b);
Var vconcat(Var a, Var b);
// Picks cells (r, c) into a k x 1 column.
Var gather(Var a, std::vector<std::pair<Eigen::Index, Eigen::Index>> cells);
Var sum(Var a);
// Summed per-row softmax cross-entropy against gold column indices;
// entries outside `mask` are excluded from the softmax. Rows whose gold
// index is negative are skipped.
Var softmax_xent(Var scores, std::vector<int> gold, const Mask* mask = nullptr);

enum class Activation { kIdentity, kRelu };

struct FFLayer {
  Parameter weight;  // d_in x d_out
  Parameter bias;    // 1 x d_out
  Activation activation = Activation::kRelu;
};

// Uniform weights in [-limit, limit] (Glorot's limit when `limit` <= 0),
// zero bias.
FFLayer make_ff_layer(const std::string& name, Eigen::Index d_in, Eigen::Index d_out,
                      Activation activation, int group, std::mt19937_64& rng,
                      double limit = 0.0);

Var ff_forward(Graph& g, FFLayer& layer, Var x);
Matrix ff_forward(const FFLayer& layer, const Matrix& x);

// S(dep, par) = [h_dep, 1] U [h_par, 1]^T + b; U is (d+1) x (d+1), b 1 x 1.
Var bilinear_scores(Var dependents, Var parents, Var u, Var b);
Matrix bilinear_scores(const Matrix& parents, const Matrix& dependents, const Matrix& u,
                       double b);

struct XentResult {
  double loss = 0.0;
  Vector grad;
};
XentResult softmax_xent(const Vector& scores, int gold);

// Inverted dropout: survivors are scaled by 1/(1-rate). Identity outside
// training.
Matrix dropout(const Matrix& x, double rate, std::uint64_t seed, bool training);

}  // namespace discarg::nn
