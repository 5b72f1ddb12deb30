#include "discarg/decoder.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "discarg/errors.hpp"

namespace discarg {

namespace {

constexpr double kNone = -std::numeric_limits<double>::infinity();

// w[d][h] is the score of arc h -> d over nodes 0..m-1; node 0 is the root.
using Dense = std::vector<std::vector<double>>;

std::vector<int> chu_liu_edmonds(const Dense& w) {
  const int m = static_cast<int>(w.size());
  std::vector<int> parent(m, -1);
  for (int d = 1; d < m; ++d) {
    double best = kNone;
    for (int h = 0; h < m; ++h)
      if (h != d && w[d][h] > best) {
        best = w[d][h];
        parent[d] = h;
      }
    if (parent[d] < 0) fail(ErrorKind::kArgument, "node without admissible head");
  }

  // Find a cycle among the greedy choices.
  std::vector<int> state(m, 0);  // 0 unvisited, 1 on current path, 2 done
  std::vector<int> cycle;
  for (int s = 1; s < m && cycle.empty(); ++s) {
    std::vector<int> path;
    int v = s;
    while (v > 0 && state[v] == 0) {
      state[v] = 1;
      path.push_back(v);
      v = parent[v];
    }
    if (v > 0 && state[v] == 1) {
      for (int u = v;;) {
        cycle.push_back(u);
        u = parent[u];
        if (u == v) break;
      }
    }
    for (int u : path) state[u] = 2;
  }
  if (cycle.empty()) return parent;

  std::vector<bool> in_cycle(m, false);
  for (int c : cycle) in_cycle[c] = true;
  std::vector<int> to_new(m, -1);
  std::vector<int> to_old;
  for (int v = 0; v < m; ++v)
    if (!in_cycle[v]) {
      to_new[v] = static_cast<int>(to_old.size());
      to_old.push_back(v);
    }
  const int c = static_cast<int>(to_old.size());
  const int mc = c + 1;
  Dense wc(mc, std::vector<double>(mc, kNone));
  std::vector<int> enter_from(mc, -1);  // for arcs u -> cycle: best cycle dependent
  std::vector<int> leave_to(mc, -1);    // for arcs cycle -> d: best cycle head
  for (int d = 0; d < m; ++d) {
    if (in_cycle[d]) continue;
    for (int h = 0; h < m; ++h) {
      if (h == d || w[d][h] == kNone) continue;
      if (!in_cycle[h]) {
        wc[to_new[d]][to_new[h]] = w[d][h];
      } else if (w[d][h] > wc[to_new[d]][c]) {
        wc[to_new[d]][c] = w[d][h];
        leave_to[to_new[d]] = h;
      }
    }
  }
  for (int d : cycle) {
    const double inner = w[d][parent[d]];
    for (int h = 0; h < m; ++h) {
      if (in_cycle[h] || w[d][h] == kNone) continue;
      const double gain = w[d][h] - inner;
      const int hn = to_new[h];
      if (enter_from[hn] < 0 || gain > wc[c][hn] ||
          (gain == wc[c][hn] && d < enter_from[hn])) {
        wc[c][hn] = gain;
        enter_from[hn] = d;
      }
    }
  }

  const std::vector<int> sub = chu_liu_edmonds(wc);
  std::vector<int> result(m, -1);
  for (int d : cycle) result[d] = parent[d];
  for (int dn = 1; dn < mc; ++dn) {
    const int hn = sub[dn];
    if (dn == c) {
      const int d = enter_from[hn];
      result[d] = to_old[hn];
    } else {
      result[to_old[dn]] = hn == c ? leave_to[dn] : to_old[hn];
    }
  }
  return result;
}

Dense to_dense(const Matrix& scores) {
  const int n = static_cast<int>(scores.rows());
  Dense w(n + 1, std::vector<double>(n + 1, kNone));
  for (int d = 1; d <= n; ++d)
    for (int h = 0; h <= n; ++h)
      if (h != d) w[d][h] = scores(d - 1, h);
  return w;
}

void check_scores(const Matrix& scores) {
  if (scores.cols() != scores.rows() + 1)
    fail(ErrorKind::kShape, fmt::format("score matrix must be n x (n+1), got {}x{}",
                                        scores.rows(), scores.cols()));
  if (!scores.allFinite()) fail(ErrorKind::kNumeric, "score matrix contains non-finite values");
}

}  // namespace

std::vector<int> decode_mst(const Matrix& scores) {
  check_scores(scores);
  const int n = static_cast<int>(scores.rows());
  if (n == 0) return {-1};
  Dense w = to_dense(scores);
  std::vector<int> heads = chu_liu_edmonds(w);
  int root_children = 0;
  for (int d = 1; d <= n; ++d) root_children += heads[d] == 0;
  if (root_children == 1) return heads;

  // Exact constraint: solve once per admissible root child.
  std::vector<int> best;
  double best_score = kNone;
  for (int r = 1; r <= n; ++r) {
    Dense wr = w;
    for (int d = 1; d <= n; ++d)
      if (d != r) wr[d][0] = kNone;
    std::vector<int> candidate = chu_liu_edmonds(wr);
    const double s = tree_score(scores, candidate);
    if (best.empty() || s > best_score) {
      best_score = s;
      best = std::move(candidate);
    }
  }
  return best;
}

std::vector<int> decode_greedy(const Matrix& scores) {
  check_scores(scores);
  const int n = static_cast<int>(scores.rows());
  std::vector<int> heads(n + 1, -1);
  for (int d = 1; d <= n; ++d) {
    double best = kNone;
    for (int h = 0; h <= n; ++h)
      if (h != d && scores(d - 1, h) > best) {
        best = scores(d - 1, h);
        heads[d] = h;
      }
  }
  return heads;
}

double tree_score(const Matrix& scores, std::span<const int> heads) {
  double total = 0.0;
  for (std::size_t d = 1; d < heads.size(); ++d) total += scores(static_cast<Eigen::Index>(d - 1), heads[d]);
  return total;
}

}  // namespace discarg
