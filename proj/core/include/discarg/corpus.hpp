#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace discarg {

// Half-open character range [start, end) into a document's text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  friend bool operator==(const Span&, const Span&) = default;
};

std::size_t overlap(const Span& a, const Span& b);

enum class UnitKind { kEdu, kAdu };
enum class Language { kEn, kRu };
enum class Variant { kOriginal, kBackTranslated };

std::string_view to_string(UnitKind kind);
std::string_view to_string(Language language);
std::string_view to_string(Variant variant);
UnitKind parse_unit_kind(std::string_view text);
Language parse_language(std::string_view text);
Variant parse_variant(std::string_view text);

struct DiscourseUnit {
  std::string id;
  std::string text;
  Span span;
  UnitKind kind = UnitKind::kAdu;

  friend bool operator==(const DiscourseUnit&, const DiscourseUnit&) = default;
};

struct Document {
  std::string id;
  Language language = Language::kEn;
  Variant variant = Variant::kOriginal;
  std::optional<std::string> source_doc_id;
  std::string text;
  std::vector<DiscourseUnit> units;

  std::size_t size() const { return units.size(); }
  friend bool operator==(const Document&, const Document&) = default;
};

// Lays the unit texts out left to right, separated by one space, and
// assigns their spans.
Document make_document(std::string id, Language language,
                       std::vector<std::string> unit_texts,
                       UnitKind kind = UnitKind::kAdu);

// Throws kStructure when a document breaks the unit invariants.
void validate(const Document& doc);

enum class ArgumentFunction { kCc = 0, kSupport = 1, kAttack = 2, kSameArg = 3 };
enum class Role { kPro, kOpp };

inline constexpr std::size_t kNumFunctions = 4;

std::string_view to_string(ArgumentFunction function);
std::string_view to_string(Role role);
ArgumentFunction parse_function(std::string_view text);
Role parse_role(std::string_view text);

// Labeled dependency tree over units 1..n; index 0 is the fictional root.
// Vectors are indexed by unit index and slot 0 is unused.
struct ArgumentTree {
  std::string doc_id;
  std::vector<int> heads;
  std::vector<ArgumentFunction> functions;
  std::vector<Role> roles;               // empty until inferred
  std::vector<std::string> raw_types;    // Microtexts edge types before simplification

  static ArgumentTree with_size(std::string doc_id, std::size_t n);

  std::size_t size() const { return heads.empty() ? 0 : heads.size() - 1; }
  bool has_functions() const { return functions.size() == heads.size(); }
  bool has_roles() const { return roles.size() == heads.size(); }
  int root_child() const;
  std::vector<std::vector<int>> children() const;

  friend bool operator==(const ArgumentTree&, const ArgumentTree&) = default;
};

// Heads form a single arborescence under the fictional root with exactly
// one root child. Throws kStructure otherwise.
void validate_heads(std::span<const int> heads);
bool is_single_root_tree(std::span<const int> heads);

// Full tree check, including the single CC arc on the root edge.
void validate(const ArgumentTree& tree);

// {sup, exa, add} -> support, {reb, und} -> attack, root arc -> cc.
ArgumentTree simplify_functions(const ArgumentTree& raw_tree);

// Microtexts arggraph XML reader. The tree carries raw edge types and no
// simplified functions yet.
struct LoadedArgGraph {
  Document document;
  ArgumentTree tree;
};
LoadedArgGraph load_arggraph_xml(const std::string& path);
LoadedArgGraph parse_arggraph_xml(std::string_view xml);

struct VariantGroup {
  Document original;
  ArgumentTree gold;
  std::vector<Document> variants;

  std::size_t size() const { return 1 + variants.size(); }
};

std::vector<VariantGroup> bundle_variants(
    std::vector<std::pair<Document, ArgumentTree>> originals,
    std::vector<Document> variants);

// Canonical JSON bundle: one document plus an optional argument tree.
struct DocumentBundle {
  Document document;
  std::optional<ArgumentTree> argument;
};

std::string to_json(const DocumentBundle& bundle);
DocumentBundle bundle_from_json(std::string_view json);
void write_bundle(const DocumentBundle& bundle, const std::string& path);
DocumentBundle read_bundle(const std::string& path);
// Reads every *.json bundle in a directory, sorted by file name.
std::vector<DocumentBundle> read_bundle_dir(const std::string& dir);

// Splits bundles into originals with gold trees and back-translated
// variants, then groups them.
std::vector<VariantGroup> group_bundles(std::vector<DocumentBundle> bundles);

}  // namespace discarg
