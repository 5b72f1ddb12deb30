#pragma once

// Independent reference implementations used to check the library. They are
// deliberately naive (exhaustive search, plain recursion, explicit loops) so
// that they share no code paths with the optimized versions under test.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "discarg/corpus.hpp"
#include "discarg/matrix.hpp"
#include "discarg/nnet.hpp"

namespace discarg::oracle {

// True when `heads` (size n+1, heads[0] ignored) is a tree rooted at 0 in
// which exactly one unit attaches to the root.
inline bool is_single_root_tree(const std::vector<int>& heads) {
  const int n = static_cast<int>(heads.size()) - 1;
  int root_children = 0;
  for (int i = 1; i <= n; ++i) {
    if (heads[i] < 0 || heads[i] > n || heads[i] == i) return false;
    if (heads[i] == 0) ++root_children;
  }
  if (root_children != 1) return false;
  for (int i = 1; i <= n; ++i) {
    int node = i;
    for (int steps = 0; node != 0; ++steps) {
      if (steps > n) return false;
      node = heads[node];
    }
  }
  return true;
}

inline double tree_score(const Matrix& scores, const std::vector<int>& heads) {
  double total = 0.0;
  for (std::size_t i = 1; i < heads.size(); ++i) total += scores(i - 1, heads[i]);
  return total;
}

// Exhaustive search over every head assignment.
inline std::vector<int> brute_force_arborescence(const Matrix& scores) {
  const int n = static_cast<int>(scores.rows());
  std::vector<int> heads(n + 1, 0), best;
  heads[0] = -1;
  double best_score = -std::numeric_limits<double>::infinity();
  std::function<void(int)> visit = [&](int i) {
    if (i > n) {
      if (!is_single_root_tree(heads)) return;
      const double s = tree_score(scores, heads);
      if (s > best_score) {
        best_score = s;
        best = heads;
      }
      return;
    }
    for (int h = 0; h <= n; ++h) {
      if (h == i) continue;
      heads[i] = h;
      visit(i + 1);
    }
  };
  visit(1);
  return best;
}

// Dialectical role of one unit, straight from the definition: the unit
// under the root is a proponent statement and an attack reverses the role
// of the unit it attacks.
inline Role role_of(const ArgumentTree& tree, int unit) {
  const int head = tree.heads[unit];
  if (head == 0) return Role::kPro;
  const Role parent = role_of(tree, head);
  if (tree.functions[unit] != ArgumentFunction::kAttack) return parent;
  return parent == Role::kPro ? Role::kOpp : Role::kPro;
}

// Random single-root tree with functions consistent with the root rule.
template <typename Rng>
ArgumentTree random_tree(Rng& rng, std::size_t n, bool with_same_arg = false) {
  ArgumentTree tree = ArgumentTree::with_size("random", n);
  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i) + 1;
  std::shuffle(order.begin(), order.end(), rng);
  tree.heads[order[0]] = 0;
  tree.functions[order[0]] = ArgumentFunction::kCc;
  const int kinds = with_same_arg ? 3 : 2;
  for (std::size_t k = 1; k < n; ++k) {
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    tree.heads[order[k]] = order[pick(rng)];
    const int f = std::uniform_int_distribution<int>(1, kinds)(rng);
    tree.functions[order[k]] = static_cast<ArgumentFunction>(f);
  }
  return tree;
}

// Central differences of a scalar function with respect to every entry of a
// parameter, compared against the accumulated analytic gradient.
struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t entries = 0;
};

// `loss` rebuilds the graph from the current parameter values and returns
// the scalar loss; it must call backward when `backward` is true.
inline GradientCheck check_gradients(
    const std::vector<nn::Parameter*>& params,
    const std::function<double(bool backward)>& loss, double h = 1e-5,
    std::size_t max_entries_per_param = std::numeric_limits<std::size_t>::max(),
    std::uint64_t sample_seed = 0) {
  for (auto* p : params) p->zero_grad();
  loss(true);
  GradientCheck out;
  std::mt19937_64 rng(sample_seed);
  for (auto* p : params) {
    const Matrix analytic = p->grad;
    const Eigen::Index size = p->value.size();
    std::vector<Eigen::Index> entries(size);
    for (Eigen::Index k = 0; k < size; ++k) entries[k] = k;
    if (static_cast<std::size_t>(size) > max_entries_per_param) {
      std::shuffle(entries.begin(), entries.end(), rng);
      entries.resize(max_entries_per_param);
    }
    for (Eigen::Index k : entries) {
      double* x = p->value.data() + k;
      const double saved = *x;
      *x = saved + h;
      const double up = loss(false);
      *x = saved - h;
      const double down = loss(false);
      *x = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double a = analytic.data()[k];
      const double scale = std::max({std::abs(numeric), std::abs(a), 1e-2});
      out.max_relative_error = std::max(out.max_relative_error, std::abs(numeric - a) / scale);
      ++out.entries;
    }
  }
  return out;
}

// Student t two-sided p-value in closed form for one and two degrees of
// freedom.
inline double t_two_sided_p(double t, int df) {
  const double a = std::abs(t);
  if (df == 1) return 1.0 - 2.0 / M_PI * std::atan(a);
  if (df == 2) return 1.0 - a / std::sqrt(2.0 + a * a);
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace discarg::oracle
