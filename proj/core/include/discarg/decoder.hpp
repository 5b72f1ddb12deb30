#pragma once

#include <span>
#include <vector>

#include "discarg/matrix.hpp"

namespace discarg {

// Score matrices are n x (n+1): row i-1 holds the scores of unit i for
// every candidate head 0..n, where 0 is the fictional root. Self-arcs are
// never selected. Returned head vectors have size n+1 with heads[0] = -1.

// Maximum spanning arborescence rooted at 0 in which the root has exactly
// one child. Ties resolve towards lower head indices.
std::vector<int> decode_mst(const Matrix& scores);

// Independent per-unit argmax; the result need not be a tree.
std::vector<int> decode_greedy(const Matrix& scores);

double tree_score(const Matrix& scores, std::span<const int> heads);

}  // namespace discarg
