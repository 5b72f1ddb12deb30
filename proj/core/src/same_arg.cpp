#include "discarg/same_arg.hpp"

#include <fmt/format.h>

#include "discarg/errors.hpp"
#include "discarg/roles.hpp"

namespace discarg {

namespace {

int depth_of(const RstDependencies& deps, std::size_t unit) {
  int depth = 0;
  for (int v = static_cast<int>(unit); v > 0; v = deps.heads[v]) {
    if (++depth > static_cast<int>(deps.heads.size()))
      fail(ErrorKind::kStructure, "RST dependencies contain a cycle");
  }
  return depth;
}

}  // namespace

ArgumentTree attach_same_arg(const RstDependencies& edu_deps, std::span<const Span> edus,
                             std::span<const DiscourseUnit> adus, const ArgumentTree& adu_tree) {
  const std::size_t n_edu = edus.size();
  if (edu_deps.size() != n_edu)
    fail(ErrorKind::kAlignment, fmt::format("{} EDUs but RST dependencies over {} units", n_edu,
                                            edu_deps.size()));
  if (adu_tree.size() != adus.size())
    fail(ErrorKind::kAlignment, fmt::format("argument tree covers {} units but there are {} ADUs",
                                            adu_tree.size(), adus.size()));
  if (!adu_tree.has_functions())
    fail(ErrorKind::kStructure, "argument tree has no functions");

  const auto owner = assign_to_segments(edus, adus);  // 0-based ADU per EDU
  std::vector<std::vector<std::size_t>> members(adus.size());
  for (std::size_t e = 0; e < n_edu; ++e) members[owner[e]].push_back(e + 1);

  std::vector<int> head_edu(adus.size() + 1, 0);
  for (std::size_t a = 0; a < adus.size(); ++a) {
    if (members[a].empty())
      fail(ErrorKind::kAlignment,
           fmt::format("ADU '{}' contains no EDU", adus[a].id.empty() ? std::to_string(a + 1)
                                                                        : adus[a].id));
    int best = -1;
    int best_depth = 0;
    for (std::size_t e : members[a]) {
      const int h = edu_deps.heads[e];
      const bool external = h == 0 || owner[static_cast<std::size_t>(h) - 1] != a;
      if (!external) continue;
      const int d = depth_of(edu_deps, e);
      if (best < 0 || d < best_depth) {
        best = static_cast<int>(e);
        best_depth = d;
      }
    }
    head_edu[a + 1] = best;
  }

  ArgumentTree out = ArgumentTree::with_size(adu_tree.doc_id, n_edu);
  out.functions.assign(n_edu + 1, ArgumentFunction::kCc);
  for (std::size_t a = 0; a < adus.size(); ++a) {
    const int adu_head = adu_tree.heads[a + 1];
    const int self = head_edu[a + 1];
    for (std::size_t e : members[a]) {
      if (static_cast<int>(e) == self) {
        out.heads[e] = adu_head == 0 ? 0 : head_edu[adu_head];
        out.functions[e] = adu_tree.functions[a + 1];
        continue;
      }
      const int h = edu_deps.heads[e];
      const bool internal = h != 0 && owner[static_cast<std::size_t>(h) - 1] == a;
      out.heads[e] = internal ? h : self;
      out.functions[e] = ArgumentFunction::kSameArg;
    }
  }
  validate(out);
  return infer_roles(std::move(out));
}

}  // namespace discarg
