#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discarg/corpus.hpp"
#include "discarg/matrix.hpp"

namespace discarg {

enum class Nuclearity { kNucleus, kSatellite };

std::string_view to_string(Nuclearity nuclearity);
Nuclearity parse_nuclearity(std::string_view text);

// RST constituency node. Leaves carry a character span; internal nodes carry
// per-child nuclearity and relation labels. The relation of a sole nucleus
// in a mononuclear relation is conventionally "span".
struct RstNode {
  std::vector<RstNode> children;
  std::vector<Nuclearity> nuclearities;
  std::vector<std::string> relations;
  Span leaf_span;

  bool is_leaf() const { return children.empty(); }

  static RstNode leaf(Span span);
  static RstNode internal(std::vector<RstNode> children, std::vector<Nuclearity> nuclearities,
                          std::vector<std::string> relations);

  friend bool operator==(const RstNode&, const RstNode&) = default;
};

std::vector<Span> leaf_spans(const RstNode& tree);
std::size_t leaf_count(const RstNode& tree);

// Structural checks: no unary nodes, a nucleus under every internal node,
// and leaves tiling [0, text_length) without gaps or overlaps.
void validate(const RstNode& tree, std::optional<std::size_t> text_length = std::nullopt);

struct RstDocument {
  std::string doc_id;
  std::optional<std::size_t> text_length;
  RstNode root;
};

RstDocument parse_rst_json_text(std::string_view json);
RstDocument parse_rst_json(const std::string& path);
std::string to_json(const RstDocument& doc);
void write_rst_json(const RstDocument& doc, const std::string& path);

// Fixed, versioned relation label order per language. Directed label index
// 2*l is relation l in its stored direction and 2*l+1 is its inversion.
struct RelationInventory {
  Language language = Language::kEn;
  std::string version;
  std::vector<std::string> labels;

  std::size_t k() const { return 2 * labels.size(); }
  // Case-insensitive lookup; also accepts '_' and ' ' in place of '-'.
  std::optional<std::size_t> find(std::string_view label) const;
  std::size_t require(std::string_view label) const;

  static const RelationInventory& builtin(Language language);
  static RelationInventory load(const std::string& path);
};

enum class RelationDirection { kForward, kInverted };

struct RstRelation {
  std::string label;
  RelationDirection direction = RelationDirection::kForward;

  friend bool operator==(const RstRelation&, const RstRelation&) = default;
};

// Dependency view of an RST tree over units 1..n (slot 0 unused). A unit
// heading to 0 is the top nucleus; its relation label is empty.
struct RstDependencies {
  std::vector<int> heads;
  std::vector<RstRelation> relations;
  // Nuclearity of each unit on its incoming arc: satellites, non-leftmost
  // nuclei of multinuclear relations, and the root nucleus.
  std::vector<Nuclearity> nuclearity;

  std::size_t size() const { return heads.empty() ? 0 : heads.size() - 1; }
  friend bool operator==(const RstDependencies&, const RstDependencies&) = default;
};

// Assigns every EDU to the ADU covering most of its characters; ties go to
// the earlier ADU. Returns 0-based ADU indices.
std::vector<std::size_t> assign_to_segments(std::span<const Span> edus,
                                            std::span<const DiscourseUnit> adus);

// Collapses the tree so that its leaves are the ADUs, in order.
RstNode reduce_to_segmentation(const RstNode& tree, std::span<const DiscourseUnit> adus);

// Leftmost-nucleus head percolation.
RstDependencies to_dependencies(const RstNode& tree);

struct RstAdjacency {
  std::size_t n = 0;
  std::size_t k = 0;
  Matrix adj;            // n x n, adj(i, j) = 1 iff unit i+1 heads to unit j+1
  Matrix full;           // (n*n) x k, row i*n+j is the one-hot label of arc i -> j
  Matrix inverted;       // (n*n) x k, row i*n+j is the inverted label of arc j -> i

  double full_at(std::size_t i, std::size_t j, std::size_t label) const {
    return full(i * n + j, label);
  }
};

RstAdjacency adjacency(const RstDependencies& deps, const RelationInventory& inventory,
                       std::size_t n);

}  // namespace discarg
