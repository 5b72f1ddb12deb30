#include "discarg/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include <fmt/format.h>

#include "discarg/errors.hpp"

namespace discarg {

namespace {

using Rng = std::mt19937_64;

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {  // inclusive
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::vector<std::string> make_vocabulary(Rng& rng) {
  static constexpr std::string_view kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n",
                                                 "p", "r", "s", "t", "v", "z", "st", "tr"};
  static constexpr std::string_view kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};
  std::vector<std::string> words;
  for (int w = 0; w < 600; ++w) {
    std::string word;
    const std::size_t syllables = uniform_index(rng, 1, 3);
    for (std::size_t s = 0; s < syllables; ++s) {
      word += kOnsets[uniform_index(rng, 0, std::size(kOnsets) - 1)];
      word += kVowels[uniform_index(rng, 0, std::size(kVowels) - 1)];
    }
    words.push_back(std::move(word));
  }
  return words;
}

std::vector<std::string> make_texts(Rng& rng, const std::vector<std::string>& vocab,
                                    std::size_t n) {
  std::vector<std::string> texts;
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    const std::size_t words = uniform_index(rng, 5, 9);
    for (std::size_t w = 0; w < words; ++w) {
      if (w) text += ' ';
      text += vocab[uniform_index(rng, 0, vocab.size() - 1)];
    }
    text += '.';
    texts.push_back(std::move(text));
  }
  return texts;
}

// Tree over ADU indices; leaf spans hold [a, a+1) placeholders.
RstNode random_shape(Rng& rng, const RelationInventory& inv, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return RstNode::leaf(Span{lo, hi});
  const std::size_t mid = uniform_index(rng, lo + 1, hi - 1);
  std::vector<RstNode> children = {random_shape(rng, inv, lo, mid),
                                   random_shape(rng, inv, mid, hi)};
  const auto label = [&] { return inv.labels[uniform_index(rng, 0, inv.labels.size() - 1)]; };
  if (coin(rng, 0.2)) {
    const std::string l = label();
    return RstNode::internal(std::move(children), {Nuclearity::kNucleus, Nuclearity::kNucleus},
                             {l, l});
  }
  if (coin(rng, 0.5))
    return RstNode::internal(std::move(children), {Nuclearity::kNucleus, Nuclearity::kSatellite},
                             {"span", label()});
  return RstNode::internal(std::move(children), {Nuclearity::kSatellite, Nuclearity::kNucleus},
                           {label(), "span"});
}

void relabel(RstNode& node, Rng& rng, const RelationInventory& inv, double rate) {
  for (auto& child : node.children) relabel(child, rng, inv, rate);
  for (std::size_t c = 0; c < node.relations.size(); ++c)
    if (node.relations[c] != "span" && coin(rng, rate))
      node.relations[c] = inv.labels[uniform_index(rng, 0, inv.labels.size() - 1)];
}

RstNode materialize(const RstNode& shape, const Document& doc, const std::vector<bool>& split,
                    const std::string& split_label) {
  if (!shape.is_leaf()) {
    RstNode out = shape;
    for (auto& child : out.children) child = materialize(child, doc, split, split_label);
    return out;
  }
  const std::size_t a = shape.leaf_span.start;
  const auto& unit = doc.units[a];
  const std::size_t end = a + 1 < doc.units.size() ? doc.units[a + 1].span.start : doc.text.size();
  if (!split[a]) return RstNode::leaf(Span{unit.span.start, end});
  const std::string_view text(doc.text.data() + unit.span.start, unit.span.length());
  std::size_t cut = text.find(' ', text.size() / 2);
  if (cut == std::string_view::npos) cut = text.rfind(' ');
  const std::size_t mid = unit.span.start + cut + 1;
  return RstNode::internal({RstNode::leaf(Span{unit.span.start, mid}), RstNode::leaf(Span{mid, end})},
                           {Nuclearity::kNucleus, Nuclearity::kSatellite}, {"span", split_label});
}

bool in_subtree(const std::vector<int>& heads, int node, int root) {
  for (int v = node; v > 0; v = heads[v])
    if (v == root) return true;
  return false;
}

}  // namespace

Corpus make_synthetic_corpus(const SyntheticConfig& config) {
  if (config.documents == 0) fail(ErrorKind::kArgument, "synthetic corpus needs documents");
  if (config.min_units < 1 || config.max_units < config.min_units)
    fail(ErrorKind::kArgument, "invalid unit range for the synthetic corpus");
  if (config.rst_agreement < 0.0 || config.rst_agreement > 1.0)
    fail(ErrorKind::kArgument, "rst_agreement must lie in [0, 1]");
  Rng rng(config.seed);
  const RelationInventory& inv = RelationInventory::builtin(config.language);
  const auto vocab = make_vocabulary(rng);
  const std::string split_label = inv.labels[inv.find("Elaborate").value_or(
      inv.find("Elaboration").value_or(0))];

  Corpus corpus;
  corpus.language = config.language;
  const std::string lang(to_string(config.language));
  for (std::size_t d = 0; d < config.documents; ++d) {
    const std::size_t n = uniform_index(rng, config.min_units, config.max_units);
    Document doc = make_document(fmt::format("syn_{}_{:03d}", lang, d + 1), config.language,
                                 make_texts(rng, vocab, n));
    const RstNode shape = random_shape(rng, inv, 0, n);
    std::vector<bool> split(n);
    for (std::size_t a = 0; a < n; ++a) split[a] = coin(rng, config.edu_split_rate);

    // Gold tree: RST dependencies with a share of arcs re-headed.
    RstNode adu_tree = materialize(shape, doc, std::vector<bool>(n, false), split_label);
    const RstDependencies deps = to_dependencies(adu_tree);
    ArgumentTree gold = ArgumentTree::with_size(doc.id, n);
    gold.heads = deps.heads;
    std::vector<int> movable;
    for (std::size_t i = 1; i <= n; ++i)
      if (gold.heads[i] != 0) movable.push_back(static_cast<int>(i));
    std::shuffle(movable.begin(), movable.end(), rng);
    const auto to_move = static_cast<std::size_t>(
        std::lround((1.0 - config.rst_agreement) * static_cast<double>(movable.size())));
    std::size_t moved = 0;
    for (int i : movable) {
      if (moved == to_move) break;
      std::vector<int> candidates;
      for (int h = 1; h <= static_cast<int>(n); ++h)
        if (h != i && h != gold.heads[i] && !in_subtree(gold.heads, h, i)) candidates.push_back(h);
      if (candidates.empty()) continue;
      gold.heads[i] = candidates[uniform_index(rng, 0, candidates.size() - 1)];
      ++moved;
    }
    for (std::size_t i = 1; i <= n; ++i)
      gold.functions[i] = gold.heads[i] == 0 ? ArgumentFunction::kCc
                          : coin(rng, config.attack_rate) ? ArgumentFunction::kAttack
                                                          : ArgumentFunction::kSupport;
    validate(gold);

    VariantGroup group;
    corpus.rst[doc.id] = materialize(shape, doc, split, split_label);
    for (std::size_t v = 0; v < config.variants_per_document; ++v) {
      std::vector<std::string> texts = make_texts(rng, vocab, n);
      Document variant = make_document(fmt::format("{}_bt{}", doc.id, v + 1), config.language,
                                       std::move(texts));
      variant.variant = Variant::kBackTranslated;
      variant.source_doc_id = doc.id;
      RstNode variant_shape = shape;
      relabel(variant_shape, rng, inv, 0.2);
      corpus.rst[variant.id] = materialize(variant_shape, variant, split, split_label);
      group.variants.push_back(std::move(variant));
    }
    group.original = std::move(doc);
    group.gold = std::move(gold);
    corpus.groups.push_back(std::move(group));
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& corpus_dir, const std::string& rst_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(corpus_dir);
  if (!rst_dir.empty()) fs::create_directories(rst_dir);
  const auto save_doc = [&](const Document& doc, const std::optional<ArgumentTree>& tree) {
    write_bundle(DocumentBundle{doc, tree}, (fs::path(corpus_dir) / (doc.id + ".json")).string());
    const auto it = corpus.rst.find(doc.id);
    if (!rst_dir.empty() && it != corpus.rst.end())
      write_rst_json(RstDocument{doc.id, doc.text.size(), it->second},
                     (fs::path(rst_dir) / (doc.id + ".rst.json")).string());
  };
  for (const auto& g : corpus.groups) {
    save_doc(g.original, g.gold);
    for (const auto& v : g.variants) save_doc(v, std::nullopt);
  }
}

Corpus load_corpus(const std::string& corpus_dir, const std::string& rst_dir) {
  Corpus corpus;
  corpus.groups = group_bundles(read_bundle_dir(corpus_dir));
  if (corpus.groups.empty())
    fail(ErrorKind::kEmptyReport, fmt::format("no documents found in '{}'", corpus_dir));
  corpus.language = corpus.groups.front().original.language;
  if (!rst_dir.empty()) load_rst_dir(corpus, rst_dir);
  return corpus;
}

}  // namespace discarg
