#include "discarg/roles.hpp"

#include <fmt/format.h>

#include "discarg/errors.hpp"

namespace discarg {

ArgumentTree infer_roles(ArgumentTree tree) {
  validate_heads(tree.heads);
  if (!is_single_root_tree(tree.heads))
    fail(ErrorKind::kStructure, fmt::format("'{}' is not a single-rooted tree", tree.doc_id));
  if (!tree.has_functions())
    fail(ErrorKind::kStructure, fmt::format("'{}' has no argumentative functions", tree.doc_id));
  const int root = tree.root_child();
  if (tree.functions[root] != ArgumentFunction::kCc)
    fail(ErrorKind::kStructure, fmt::format("'{}' has no central claim", tree.doc_id));

  tree.roles.assign(tree.heads.size(), Role::kPro);
  const auto children = tree.children();
  std::vector<int> stack = {root};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int c : children[u]) {
      const bool flip = tree.functions[c] == ArgumentFunction::kAttack;
      tree.roles[c] = flip ? (tree.roles[u] == Role::kPro ? Role::kOpp : Role::kPro)
                           : tree.roles[u];
      stack.push_back(c);
    }
  }
  return tree;
}

}  // namespace discarg
