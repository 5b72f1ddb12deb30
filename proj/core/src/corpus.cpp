#include "discarg/corpus.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

#include "discarg/errors.hpp"

namespace discarg {

std::size_t overlap(const Span& a, const Span& b) {
  const std::size_t lo = std::max(a.start, b.start);
  const std::size_t hi = std::min(a.end, b.end);
  return hi > lo ? hi - lo : 0;
}

std::string_view to_string(UnitKind kind) {
  return kind == UnitKind::kEdu ? "edu" : "adu";
}

std::string_view to_string(Language language) {
  return language == Language::kEn ? "en" : "ru";
}

std::string_view to_string(Variant variant) {
  return variant == Variant::kOriginal ? "original" : "back-translated";
}

UnitKind parse_unit_kind(std::string_view text) {
  if (text == "edu" || text == "EDU") return UnitKind::kEdu;
  if (text == "adu" || text == "ADU") return UnitKind::kAdu;
  fail(ErrorKind::kFormat, fmt::format("unknown unit kind '{}'", text));
}

Language parse_language(std::string_view text) {
  if (text == "en" || text == "En" || text == "EN") return Language::kEn;
  if (text == "ru" || text == "Ru" || text == "RU") return Language::kRu;
  fail(ErrorKind::kFormat, fmt::format("unknown language '{}'", text));
}

Variant parse_variant(std::string_view text) {
  if (text == "original") return Variant::kOriginal;
  if (text == "back-translated" || text == "backtranslated" || text == "paraphrase")
    return Variant::kBackTranslated;
  fail(ErrorKind::kFormat, fmt::format("unknown variant '{}'", text));
}

std::string_view to_string(ArgumentFunction function) {
  switch (function) {
    case ArgumentFunction::kCc: return "cc";
    case ArgumentFunction::kSupport: return "support";
    case ArgumentFunction::kAttack: return "attack";
    case ArgumentFunction::kSameArg: return "same-arg";
  }
  return "?";
}

std::string_view to_string(Role role) { return role == Role::kPro ? "pro" : "opp"; }

ArgumentFunction parse_function(std::string_view text) {
  if (text == "cc") return ArgumentFunction::kCc;
  if (text == "support") return ArgumentFunction::kSupport;
  if (text == "attack") return ArgumentFunction::kAttack;
  if (text == "same-arg") return ArgumentFunction::kSameArg;
  fail(ErrorKind::kMapping, fmt::format("unknown argumentative function '{}'", text));
}

Role parse_role(std::string_view text) {
  if (text == "pro") return Role::kPro;
  if (text == "opp") return Role::kOpp;
  fail(ErrorKind::kFormat, fmt::format("unknown role '{}'", text));
}

Document make_document(std::string id, Language language,
                       std::vector<std::string> unit_texts, UnitKind kind) {
  Document doc;
  doc.id = std::move(id);
  doc.language = language;
  const char prefix = kind == UnitKind::kEdu ? 'e' : 'a';
  for (std::size_t i = 0; i < unit_texts.size(); ++i) {
    if (i > 0) doc.text += ' ';
    DiscourseUnit unit;
    unit.id = fmt::format("{}{}", prefix, i + 1);
    unit.span.start = doc.text.size();
    doc.text += unit_texts[i];
    unit.span.end = doc.text.size();
    unit.text = std::move(unit_texts[i]);
    unit.kind = kind;
    doc.units.push_back(std::move(unit));
  }
  return doc;
}

void validate(const Document& doc) {
  if (doc.units.empty())
    fail(ErrorKind::kStructure, fmt::format("document '{}' has no units", doc.id));
  std::unordered_set<std::string> ids;
  std::size_t previous_end = 0;
  for (const auto& unit : doc.units) {
    if (!ids.insert(unit.id).second)
      fail(ErrorKind::kStructure,
           fmt::format("document '{}': duplicate unit id '{}'", doc.id, unit.id));
    if (unit.span.start >= unit.span.end)
      fail(ErrorKind::kStructure,
           fmt::format("document '{}': unit '{}' has an empty span", doc.id, unit.id));
    if (unit.span.start < previous_end)
      fail(ErrorKind::kStructure,
           fmt::format("document '{}': unit '{}' overlaps its predecessor", doc.id, unit.id));
    if (unit.span.end > doc.text.size() ||
        doc.text.compare(unit.span.start, unit.span.length(), unit.text) != 0)
      fail(ErrorKind::kStructure,
           fmt::format("document '{}': unit '{}' text does not match its span", doc.id,
                       unit.id));
    previous_end = unit.span.end;
  }
}

ArgumentTree ArgumentTree::with_size(std::string doc_id, std::size_t n) {
  ArgumentTree tree;
  tree.doc_id = std::move(doc_id);
  tree.heads.assign(n + 1, -1);
  tree.functions.assign(n + 1, ArgumentFunction::kSupport);
  return tree;
}

int ArgumentTree::root_child() const {
  for (std::size_t i = 1; i < heads.size(); ++i)
    if (heads[i] == 0) return static_cast<int>(i);
  return -1;
}

std::vector<std::vector<int>> ArgumentTree::children() const {
  std::vector<std::vector<int>> out(heads.size());
  for (std::size_t i = 1; i < heads.size(); ++i)
    if (heads[i] >= 0 && static_cast<std::size_t>(heads[i]) < heads.size())
      out[heads[i]].push_back(static_cast<int>(i));
  return out;
}

namespace {

// Returns an empty string when heads form a valid tree.
std::string tree_problem(std::span<const int> heads) {
  if (heads.size() < 2) return "tree has no units";
  const int n = static_cast<int>(heads.size()) - 1;
  int root_children = 0;
  for (int i = 1; i <= n; ++i) {
    const int h = heads[i];
    if (h < 0 || h > n) return fmt::format("unit {} has out-of-range head {}", i, h);
    if (h == i) return fmt::format("unit {} heads itself", i);
    if (h == 0) ++root_children;
  }
  if (root_children != 1)
    return fmt::format("expected exactly one root-attached unit, found {}", root_children);
  // Walk each node upward; a walk longer than n steps means a cycle.
  std::vector<int> state(n + 1, 0);  // 0 unknown, 1 on stack, 2 reaches root
  state[0] = 2;
  for (int start = 1; start <= n; ++start) {
    std::vector<int> path;
    int v = start;
    while (state[v] == 0) {
      state[v] = 1;
      path.push_back(v);
      v = heads[v];
    }
    if (state[v] == 1) return fmt::format("cycle through unit {}", v);
    for (int p : path) state[p] = 2;
  }
  return {};
}

}  // namespace

bool is_single_root_tree(std::span<const int> heads) { return tree_problem(heads).empty(); }

void validate_heads(std::span<const int> heads) {
  if (auto problem = tree_problem(heads); !problem.empty())
    fail(ErrorKind::kStructure, problem);
}

void validate(const ArgumentTree& tree) {
  validate_heads(tree.heads);
  if (!tree.has_functions())
    fail(ErrorKind::kStructure, fmt::format("tree '{}' has no functions", tree.doc_id));
  for (std::size_t i = 1; i < tree.heads.size(); ++i) {
    const bool is_root_arc = tree.heads[i] == 0;
    const bool is_cc = tree.functions[i] == ArgumentFunction::kCc;
    if (is_root_arc != is_cc)
      fail(ErrorKind::kStructure,
           fmt::format("tree '{}': unit {} violates the single-cc rule", tree.doc_id, i));
  }
}

ArgumentTree simplify_functions(const ArgumentTree& raw_tree) {
  ArgumentTree out = raw_tree;
  validate_heads(out.heads);
  const std::size_t n = out.size();
  if (out.raw_types.empty()) {
    // Already simplified.
    validate(out);
    return out;
  }
  if (out.raw_types.size() != n + 1)
    fail(ErrorKind::kStructure,
         fmt::format("tree '{}': raw edge types do not cover every unit", out.doc_id));
  out.functions.assign(n + 1, ArgumentFunction::kSupport);
  for (std::size_t i = 1; i <= n; ++i) {
    if (out.heads[i] == 0) {
      out.functions[i] = ArgumentFunction::kCc;
      continue;
    }
    const std::string& raw = out.raw_types[i];
    if (raw == "sup" || raw == "exa" || raw == "add") {
      out.functions[i] = ArgumentFunction::kSupport;
    } else if (raw == "reb" || raw == "und") {
      out.functions[i] = ArgumentFunction::kAttack;
    } else if (raw == "support" || raw == "attack" || raw == "same-arg") {
      out.functions[i] = parse_function(raw);
    } else {
      fail(ErrorKind::kMapping,
           fmt::format("tree '{}': unknown raw edge type '{}' on unit {}", out.doc_id, raw, i));
    }
  }
  out.raw_types.clear();
  return out;
}

std::vector<VariantGroup> bundle_variants(
    std::vector<std::pair<Document, ArgumentTree>> originals,
    std::vector<Document> variants) {
  std::vector<VariantGroup> groups;
  std::map<std::string, std::size_t> by_id;
  for (auto& [doc, tree] : originals) {
    if (tree.size() != doc.size())
      fail(ErrorKind::kAlignment,
           fmt::format("document '{}' has {} units but its tree has {}", doc.id, doc.size(),
                       tree.size()));
    if (!by_id.emplace(doc.id, groups.size()).second)
      fail(ErrorKind::kReference, fmt::format("duplicate original '{}'", doc.id));
    groups.push_back(VariantGroup{std::move(doc), std::move(tree), {}});
  }
  for (auto& variant : variants) {
    if (!variant.source_doc_id)
      fail(ErrorKind::kReference,
           fmt::format("variant '{}' does not name its source document", variant.id));
    auto it = by_id.find(*variant.source_doc_id);
    if (it == by_id.end())
      fail(ErrorKind::kReference, fmt::format("variant '{}' refers to unknown original '{}'",
                                              variant.id, *variant.source_doc_id));
    VariantGroup& group = groups[it->second];
    if (variant.size() != group.original.size())
      fail(ErrorKind::kAlignment,
           fmt::format("variant '{}' has {} units but original '{}' has {}", variant.id,
                       variant.size(), group.original.id, group.original.size()));
    group.variants.push_back(std::move(variant));
  }
  return groups;
}

std::vector<VariantGroup> group_bundles(std::vector<DocumentBundle> bundles) {
  // A variant may repeat the gold tree; its topology must then match.
  std::map<std::string, std::vector<int>> variant_heads;
  for (const auto& bundle : bundles)
    if (bundle.document.variant == Variant::kBackTranslated && bundle.argument)
      variant_heads[bundle.document.id] = bundle.argument->heads;

  std::vector<std::pair<Document, ArgumentTree>> originals;
  std::vector<Document> variants;
  for (auto& bundle : bundles) {
    if (bundle.document.variant == Variant::kOriginal) {
      if (!bundle.argument)
        fail(ErrorKind::kIntegrity,
             fmt::format("original '{}' has no argument tree", bundle.document.id));
      originals.emplace_back(std::move(bundle.document), simplify_functions(*bundle.argument));
    } else {
      variants.push_back(std::move(bundle.document));
    }
  }
  auto groups = bundle_variants(std::move(originals), std::move(variants));
  for (const auto& group : groups)
    for (const auto& variant : group.variants) {
      auto it = variant_heads.find(variant.id);
      if (it != variant_heads.end() && it->second != group.gold.heads)
        fail(ErrorKind::kAlignment,
             fmt::format("variant '{}' carries a tree that differs from its original '{}'",
                         variant.id, group.original.id));
    }
  return groups;
}

}  // namespace discarg
