#include "discarg/rst.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "discarg/errors.hpp"

namespace discarg {

std::string_view to_string(Nuclearity nuclearity) {
  return nuclearity == Nuclearity::kNucleus ? "N" : "S";
}

Nuclearity parse_nuclearity(std::string_view text) {
  if (text == "N" || text == "n" || text == "nucleus" || text == "Nucleus")
    return Nuclearity::kNucleus;
  if (text == "S" || text == "s" || text == "satellite" || text == "Satellite")
    return Nuclearity::kSatellite;
  fail(ErrorKind::kFormat, fmt::format("unknown nuclearity '{}'", text));
}

RstNode RstNode::leaf(Span span) {
  RstNode node;
  node.leaf_span = span;
  return node;
}

RstNode RstNode::internal(std::vector<RstNode> children, std::vector<Nuclearity> nuclearities,
                          std::vector<std::string> relations) {
  RstNode node;
  node.children = std::move(children);
  node.nuclearities = std::move(nuclearities);
  node.relations = std::move(relations);
  if (!node.children.empty()) {
    node.leaf_span = Span{node.children.front().leaf_span.start,
                          node.children.back().leaf_span.end};
  }
  return node;
}

namespace {

void collect_leaves(const RstNode& node, std::vector<Span>& out) {
  if (node.is_leaf()) {
    out.push_back(node.leaf_span);
    return;
  }
  for (const auto& child : node.children) collect_leaves(child, out);
}

void validate_node(const RstNode& node) {
  if (node.is_leaf()) return;
  const std::size_t c = node.children.size();
  if (c == 1) fail(ErrorKind::kStructure, "RST node with a single child (unary chain)");
  if (node.nuclearities.size() != c || node.relations.size() != c)
    fail(ErrorKind::kFormat, "RST node needs one nuclearity and one relation per child");
  if (std::none_of(node.nuclearities.begin(), node.nuclearities.end(),
                   [](Nuclearity x) { return x == Nuclearity::kNucleus; }))
    fail(ErrorKind::kNuclearity, "RST node without a nucleus child");
  for (const auto& child : node.children) validate_node(child);
}

}  // namespace

std::vector<Span> leaf_spans(const RstNode& tree) {
  std::vector<Span> out;
  collect_leaves(tree, out);
  return out;
}

std::size_t leaf_count(const RstNode& tree) {
  if (tree.is_leaf()) return 1;
  std::size_t total = 0;
  for (const auto& child : tree.children) total += leaf_count(child);
  return total;
}

void validate(const RstNode& tree, std::optional<std::size_t> text_length) {
  validate_node(tree);
  const auto spans = leaf_spans(tree);
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const Span& s = spans[i];
    if (s.start >= s.end)
      fail(ErrorKind::kSegmentation, fmt::format("leaf {} has an empty span", i + 1));
    if (s.start > cursor)
      fail(ErrorKind::kSegmentation,
           fmt::format("gap before leaf {}: [{}, {}) is not covered", i + 1, cursor, s.start));
    if (s.start < cursor)
      fail(ErrorKind::kSegmentation,
           fmt::format("leaf {} overlaps its predecessor at offset {}", i + 1, s.start));
    cursor = s.end;
  }
  if (text_length && cursor != *text_length)
    fail(ErrorKind::kSegmentation,
         fmt::format("leaves end at {} but the text has {} characters", cursor, *text_length));
}

// ---------------------------------------------------------------------------
// Inventories

namespace {

std::string fold_label(std::string_view label) {
  std::string out;
  out.reserve(label.size());
  for (char ch : label) {
    if (ch == '_' || ch == ' ') ch = '-';
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  return out;
}

RelationInventory make_builtin(Language language) {
  RelationInventory inv;
  inv.language = language;
  inv.version = "v1";
  if (language == Language::kEn) {
    inv.labels = {"Contrast",    "Cause",        "Enablement",    "Manner-Means",
                  "Explanation", "Summary",      "Temporal",      "Joint",
                  "Elaborate",   "Comparison",   "Solutionhood",  "Attribution",
                  "Condition",   "Same-Unit",    "Background",    "Topic-Comment",
                  "Topic-Change"};
  } else {
    inv.labels = {"Restatement", "Concession",  "Condition", "Preparation",
                  "Cause-effect", "Contrast",   "Purpose",   "Evidence",
                  "Sequence",    "Joint",       "Elaboration",
                  "Interpretation-evaluation",  "Solutionhood",
                  "Attribution", "Same-unit"};
  }
  return inv;
}

}  // namespace

std::optional<std::size_t> RelationInventory::find(std::string_view label) const {
  const std::string key = fold_label(label);
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (fold_label(labels[i]) == key) return i;
  // Upstream English parsers emit the RST-DT class name "Elaboration".
  if (language == Language::kEn && key == "elaboration") return find("Elaborate");
  return std::nullopt;
}

std::size_t RelationInventory::require(std::string_view label) const {
  auto idx = find(label);
  if (!idx)
    fail(ErrorKind::kMapping,
         fmt::format("relation '{}' is not in the {} inventory {}", label, to_string(language),
                     version));
  return *idx;
}

const RelationInventory& RelationInventory::builtin(Language language) {
  static const RelationInventory en = make_builtin(Language::kEn);
  static const RelationInventory ru = make_builtin(Language::kRu);
  return language == Language::kEn ? en : ru;
}

RelationInventory RelationInventory::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, fmt::format("cannot open inventory '{}'", path));
  RelationInventory inv;
  bool have_language = false;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream header(line.substr(1));
      std::string key, value;
      header >> key >> value;
      if (key == "language") {
        inv.language = parse_language(value);
        have_language = true;
      } else if (key == "version") {
        inv.version = value;
      }
      continue;
    }
    inv.labels.push_back(line);
  }
  if (!have_language || inv.version.empty() || inv.labels.empty())
    fail(ErrorKind::kFormat,
         fmt::format("inventory '{}' needs '# language', '# version' and labels", path));
  return inv;
}

// ---------------------------------------------------------------------------
// Segmentation and reduction

std::vector<std::size_t> assign_to_segments(std::span<const Span> edus,
                                            std::span<const DiscourseUnit> adus) {
  if (adus.empty()) fail(ErrorKind::kArgument, "empty ADU list");
  std::vector<std::size_t> out;
  out.reserve(edus.size());
  for (std::size_t e = 0; e < edus.size(); ++e) {
    std::size_t best = adus.size();
    std::size_t best_overlap = 0;
    for (std::size_t a = 0; a < adus.size(); ++a) {
      const std::size_t ov = overlap(edus[e], adus[a].span);
      if (ov > best_overlap) {
        best_overlap = ov;
        best = a;
      }
    }
    if (best == adus.size()) {
      // Whitespace-only or uncovered EDU: attach to the nearest preceding ADU.
      for (std::size_t a = 0; a < adus.size(); ++a)
        if (adus[a].span.start <= edus[e].start) best = a;
      if (best == adus.size()) best = 0;
    }
    out.push_back(best);
  }
  return out;
}

namespace {

struct NodeInfo {
  std::size_t lo = 0;  // leaf range [lo, hi)
  std::size_t hi = 0;
};

void index_ranges(const RstNode& node, std::size_t& cursor,
                  std::map<const RstNode*, NodeInfo>& info) {
  NodeInfo ni;
  ni.lo = cursor;
  if (node.is_leaf()) {
    ++cursor;
  } else {
    for (const auto& child : node.children) index_ranges(child, cursor, info);
  }
  ni.hi = cursor;
  info[&node] = ni;
}

class Reducer {
 public:
  Reducer(const RstNode& tree, std::span<const DiscourseUnit> adus)
      : tree_(tree), adus_(adus) {
    std::size_t cursor = 0;
    index_ranges(tree_, cursor, info_);
    spans_ = leaf_spans(tree_);
    owner_ = assign_to_segments(spans_, adus_);
    for (std::size_t a = 0; a < adus_.size(); ++a) {
      if (std::find(owner_.begin(), owner_.end(), a) == owner_.end())
        fail(ErrorKind::kAlignment,
             fmt::format("ADU '{}' does not contain any discourse unit", adus_[a].id));
      targets_[find_target(a)] = a;
    }
  }

  RstNode run() {
    auto reduced = reduce(tree_);
    if (!reduced) fail(ErrorKind::kAlignment, "reduction removed every leaf");
    const auto leaves = leaf_spans(*reduced);
    if (leaves.size() != adus_.size())
      fail(ErrorKind::kAlignment,
           fmt::format("reduced tree has {} leaves for {} ADUs", leaves.size(), adus_.size()));
    for (std::size_t a = 0; a < adus_.size(); ++a)
      if (!(leaves[a] == adus_[a].span))
        fail(ErrorKind::kAlignment,
             fmt::format("ADU '{}' is out of order in the reduced tree", adus_[a].id));
    return *reduced;
  }

 private:
  bool pure(const RstNode& node, std::size_t adu) const {
    const auto& ni = info_.at(&node);
    for (std::size_t i = ni.lo; i < ni.hi; ++i)
      if (owner_[i] != adu) return false;
    return true;
  }

  std::size_t mass(const RstNode& node, std::size_t adu) const {
    const auto& ni = info_.at(&node);
    std::size_t total = 0;
    for (std::size_t i = ni.lo; i < ni.hi; ++i)
      if (owner_[i] == adu) total += overlap(spans_[i], adus_[adu].span) + 1;
    return total;
  }

  // Descends from the root toward the subtree holding most of the ADU's
  // characters until the subtree contains nothing but that ADU.
  const RstNode* find_target(std::size_t adu) const {
    const RstNode* node = &tree_;
    while (!pure(*node, adu)) {
      const RstNode* best = nullptr;
      std::size_t best_mass = 0;
      for (const auto& child : node->children) {
        const std::size_t m = mass(child, adu);
        if (m > best_mass) {
          best_mass = m;
          best = &child;
        }
      }
      node = best;
    }
    return node;
  }

  std::optional<RstNode> reduce(const RstNode& node) const {
    if (auto it = targets_.find(&node); it != targets_.end())
      return RstNode::leaf(adus_[it->second].span);
    const auto& ni = info_.at(&node);
    if (pure(node, owner_[ni.lo])) return std::nullopt;  // fragment of a relocated ADU

    std::vector<RstNode> children;
    std::vector<Nuclearity> nuclearities;
    std::vector<std::string> relations;
    for (std::size_t c = 0; c < node.children.size(); ++c) {
      auto reduced = reduce(node.children[c]);
      if (!reduced) continue;
      children.push_back(std::move(*reduced));
      nuclearities.push_back(node.nuclearities[c]);
      relations.push_back(node.relations[c]);
    }
    if (children.empty()) return std::nullopt;
    if (children.size() == 1) return std::move(children.front());
    if (std::none_of(nuclearities.begin(), nuclearities.end(),
                     [](Nuclearity x) { return x == Nuclearity::kNucleus; })) {
      nuclearities.front() = Nuclearity::kNucleus;
      relations.front() = "span";
    }
    return RstNode::internal(std::move(children), std::move(nuclearities), std::move(relations));
  }

  const RstNode& tree_;
  std::span<const DiscourseUnit> adus_;
  std::map<const RstNode*, NodeInfo> info_;
  std::vector<Span> spans_;
  std::vector<std::size_t> owner_;
  std::map<const RstNode*, std::size_t> targets_;
};

}  // namespace

RstNode reduce_to_segmentation(const RstNode& tree, std::span<const DiscourseUnit> adus) {
  if (adus.empty()) fail(ErrorKind::kArgument, "empty ADU list");
  return Reducer(tree, adus).run();
}

// ---------------------------------------------------------------------------
// Dependencies and adjacency

namespace {

int percolate(const RstNode& node, int& counter, RstDependencies& deps) {
  if (node.is_leaf()) return ++counter;
  std::vector<int> heads;
  heads.reserve(node.children.size());
  for (const auto& child : node.children) heads.push_back(percolate(child, counter, deps));
  std::size_t head_child = 0;
  while (node.nuclearities[head_child] != Nuclearity::kNucleus) ++head_child;
  for (std::size_t c = 0; c < node.children.size(); ++c) {
    if (c == head_child) continue;
    deps.heads[heads[c]] = heads[head_child];
    deps.relations[heads[c]] = RstRelation{node.relations[c], RelationDirection::kForward};
    deps.nuclearity[heads[c]] = node.nuclearities[c];
  }
  return heads[head_child];
}

}  // namespace

RstDependencies to_dependencies(const RstNode& tree) {
  validate_node(tree);
  const std::size_t n = leaf_count(tree);
  RstDependencies deps;
  deps.heads.assign(n + 1, -1);
  deps.relations.assign(n + 1, RstRelation{});
  deps.nuclearity.assign(n + 1, Nuclearity::kNucleus);
  int counter = 0;
  const int top = percolate(tree, counter, deps);
  deps.heads[top] = 0;
  return deps;
}

RstAdjacency adjacency(const RstDependencies& deps, const RelationInventory& inventory,
                       std::size_t n) {
  if (deps.size() != n)
    fail(ErrorKind::kBounds,
         fmt::format("dependencies cover {} units but the document has {}", deps.size(), n));
  RstAdjacency out;
  out.n = n;
  out.k = inventory.k();
  out.adj = Matrix::Zero(n, n);
  out.full = Matrix::Zero(n * n, out.k);
  out.inverted = Matrix::Zero(n * n, out.k);
  for (std::size_t i = 1; i <= n; ++i) {
    const int h = deps.heads[i];
    if (h == 0) continue;
    if (h < 0 || static_cast<std::size_t>(h) > n)
      fail(ErrorKind::kBounds, fmt::format("unit {} heads to {} outside 1..{}", i, h, n));
    const std::size_t j = static_cast<std::size_t>(h);
    const auto& rel = deps.relations[i];
    const std::size_t slot =
        2 * inventory.require(rel.label) + (rel.direction == RelationDirection::kInverted ? 1 : 0);
    out.adj(i - 1, j - 1) = 1.0;
    out.full((i - 1) * n + (j - 1), slot) = 1.0;
    out.inverted((j - 1) * n + (i - 1), slot ^ 1U) = 1.0;
  }
  return out;
}

}  // namespace discarg
