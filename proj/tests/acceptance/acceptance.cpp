// Acceptance suite: one PASS/FAIL line per criterion, followed by details.
// Exit status is non-zero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "discarg/agreement.hpp"
#include "discarg/argeval.hpp"
#include "discarg/corpus.hpp"
#include "discarg/cross_validation.hpp"
#include "discarg/decoder.hpp"
#include "discarg/roles.hpp"
#include "discarg/rst.hpp"
#include "discarg/same_arg.hpp"
#include "discarg/synthetic.hpp"
#include "model_helpers.hpp"
#include "op_checks.hpp"
#include "oracles.hpp"

namespace discarg {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<const VariantGroup*> groups_of(const Corpus& corpus) {
  std::vector<const VariantGroup*> out;
  for (const auto& g : corpus.groups) out.push_back(&g);
  return out;
}

Outcome gradient_correctness() {
  const auto start = Clock::now();
  double worst_op = 0.0, worst_loss = 0.0;
  std::string worst_op_name;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    for (const auto& [op, error] : test_support::op_gradient_errors(seed)) {
      if (error > worst_op) {
        worst_op = error;
        worst_op_name = op;
      }
    }
    worst_loss = std::max(worst_loss, test_support::full_loss_gradient_error(seed));
  }
  const double elapsed = seconds_since(start);
  return {worst_op < 1e-4 && worst_loss < 1e-4 && elapsed < 30.0,
          fmt::format("100 seeds; max rel err ops {:.2e} ({}), full loss {:.2e}; {:.1f}s", worst_op,
                      worst_op_name, worst_loss, elapsed)};
}

Outcome decoder_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g(0.0, 1.0);
  std::size_t mismatches = 0, trials = 0;
  for (int n = 2; n <= 6; ++n) {
    for (int t = 0; t < 200; ++t, ++trials) {
      Matrix scores(n, n + 1);
      for (Eigen::Index i = 0; i < scores.size(); ++i) scores.data()[i] = g(rng);
      const auto fast = decode_mst(scores);
      const auto exact = oracle::brute_force_arborescence(scores);
      if (fast != exact) ++mismatches;
    }
  }
  const double elapsed = seconds_since(start);
  return {mismatches == 0 && elapsed < 10.0,
          fmt::format("{} matrices, {} mismatches; {:.1f}s", trials, mismatches, elapsed)};
}

Outcome role_oracle() {
  std::mt19937_64 rng(77);
  std::size_t mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + t % 10;
    const ArgumentTree tree = oracle::random_tree(rng, n, t % 2 == 1);
    const ArgumentTree inferred = infer_roles(tree);
    for (std::size_t i = 1; i <= n; ++i)
      if (inferred.roles[i] != oracle::role_of(tree, static_cast<int>(i))) {
        ++mismatches;
        break;
      }
  }
  // Star: one claim supported by four premises.
  ArgumentTree star = ArgumentTree::with_size("star", 5);
  star.heads = {-1, 0, 1, 1, 1, 1};
  star.functions = {ArgumentFunction::kCc, ArgumentFunction::kCc, ArgumentFunction::kSupport,
                    ArgumentFunction::kSupport, ArgumentFunction::kSupport,
                    ArgumentFunction::kSupport};
  const ArgumentTree star_roles = infer_roles(star);
  const bool all_pro = std::all_of(star_roles.roles.begin() + 1, star_roles.roles.end(),
                                   [](Role r) { return r == Role::kPro; });
  return {mismatches == 0 && all_pro,
          fmt::format("1000 trees, {} mismatches; star all pro: {}", mismatches, all_pro)};
}

Outcome frozen_equivalence() {
  SyntheticConfig sc;
  sc.documents = 12;
  sc.seed = 4;
  const Corpus corpus = make_synthetic_corpus(sc);
  const HashEmbeddingProvider emb(32);
  const auto groups = groups_of(corpus);
  TrainConfig tc;
  tc.max_epochs = 5;
  tc.seed = 8;

  struct Run {
    Checkpoint checkpoint;
    std::vector<ArgumentTree> parses;
  };
  const auto run = [&](Mode mode) {
    PipelineConfig pc;
    pc.mode = mode;
    const auto train_set = build_training_instances(groups, corpus, pc, emb);
    ModelConfig mc = model_config(pc, corpus, emb.dim());
    mc.freeze_coefficients = true;
    const TrainResult r = train(init_params(mc, 8), train_set, train_set, tc);
    Run out{to_checkpoint(r.params), {}};
    for (const auto& inst : train_set) out.parses.push_back(parse_instance(r.params, inst));
    return out;
  };
  const Run bap = run(Mode::kBap);
  std::size_t differing = 0, compared = 0, parse_diffs = 0;
  for (Mode mode : {Mode::kDbap5, Mode::kDbap6, Mode::kDbap7}) {
    const Run dbap = run(mode);
    for (const auto& t : bap.checkpoint.tensors) {
      const NamedTensor* other = dbap.checkpoint.find(t.name);
      ++compared;
      if (other == nullptr || other->value.rows() != t.value.rows() ||
          other->value.cols() != t.value.cols() ||
          std::memcmp(other->value.data(), t.value.data(), t.value.size() * sizeof(double)) != 0)
        ++differing;
    }
    for (std::size_t i = 0; i < bap.parses.size(); ++i)
      if (bap.parses[i].heads != dbap.parses[i].heads ||
          bap.parses[i].functions != dbap.parses[i].functions)
        ++parse_diffs;
  }
  return {differing == 0 && parse_diffs == 0,
          fmt::format("DBAP5/6/7 vs BAP: {} of {} shared tensors differ, {} parses differ",
                      differing, compared, parse_diffs)};
}

Outcome overfit() {
  const auto start = Clock::now();
  SyntheticConfig sc;
  sc.documents = 10;
  sc.seed = 1;
  const Corpus corpus = make_synthetic_corpus(sc);
  const HashEmbeddingProvider emb;
  const PipelineConfig pc;
  const auto train_set = build_training_instances(groups_of(corpus), corpus, pc, emb);
  TrainConfig tc;
  tc.max_epochs = 200;
  tc.patience = 200;
  tc.stop_at_perfect_dev = true;
  const TrainResult r =
      train(init_params(model_config(pc, corpus, emb.dim()), 1), train_set, train_set, tc);
  const auto [uas, las] = attachment_scores(r.params, train_set);
  const double elapsed = seconds_since(start);
  return {las == 100.0 && r.history.size() <= 200 && elapsed < 120.0,
          fmt::format("train UAS {:.1f} LAS {:.1f} after {} epochs; {:.1f}s", uas, las,
                      r.history.size(), elapsed)};
}

Outcome directional_benefit() {
  const auto start = Clock::now();
  SyntheticConfig sc;
  sc.documents = 60;
  sc.rst_agreement = 0.8;
  sc.seed = 60;
  const Corpus corpus = make_synthetic_corpus(sc);
  const HashEmbeddingProvider emb;
  // One held-out quarter of the originals; the rest trains (with a dev share).
  const auto folds = make_folds(corpus, 4, 60);
  const std::vector<Fold> held_out = {folds.front()};
  std::vector<double> bap_uas, dbap_uas;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (Mode mode : {Mode::kBap, Mode::kDbap6}) {
      ExperimentConfig config;
      config.pipeline.mode = mode;
      config.seed = seed;
      config.train.seed = seed;
      const auto result = cross_validate(corpus, held_out, config, emb);
      (mode == Mode::kBap ? bap_uas : dbap_uas).push_back(result.report.mean.uas);
    }
  }
  double mean_gap = 0.0;
  for (std::size_t i = 0; i < bap_uas.size(); ++i) mean_gap += dbap_uas[i] - bap_uas[i];
  mean_gap /= static_cast<double>(bap_uas.size());
  const TTest t = paired_ttest(dbap_uas, bap_uas);
  std::string per_seed;
  for (std::size_t i = 0; i < bap_uas.size(); ++i)
    per_seed += fmt::format(" {:.1f}/{:.1f}", bap_uas[i], dbap_uas[i]);
  return {mean_gap >= 5.0 && t.p < 0.05,
          fmt::format("held-out UAS BAP/DBAP6 per seed:{}; gap {:.1f}, p {:.2g}; {:.1f}s", per_seed,
                      mean_gap, t.p, seconds_since(start))};
}

Outcome augmentation() {
  SyntheticConfig sc;
  sc.documents = 10;
  sc.variants_per_document = 1;
  const Corpus corpus = make_synthetic_corpus(sc);
  const HashEmbeddingProvider emb(16);
  const auto groups = groups_of(corpus);
  PipelineConfig plain, augmented;
  augmented.augmented = true;
  const std::size_t base = build_training_instances(groups, corpus, plain, emb).size();
  const std::size_t aug = build_training_instances(groups, corpus, augmented, emb).size();
  const auto test = build_test_instances(groups, corpus, augmented, emb);
  const bool originals_only =
      std::all_of(test.begin(), test.end(), [](const Instance& i) { return i.original; });
  return {aug == 2 * base && test.size() == groups.size() && originals_only,
          fmt::format("train instances {} -> {}; test {} (originals only: {})", base, aug,
                      test.size(), originals_only)};
}

ArgumentTree make_tree(std::vector<int> heads, std::vector<ArgumentFunction> functions) {
  ArgumentTree t = ArgumentTree::with_size("doc", heads.size());
  t.heads.assign(1, -1);
  t.heads.insert(t.heads.end(), heads.begin(), heads.end());
  t.functions.assign(1, ArgumentFunction::kCc);
  t.functions.insert(t.functions.end(), functions.begin(), functions.end());
  return t;
}

bool scores_near(const Scores& s, const std::array<double, 6>& expected) {
  for (std::size_t m = 0; m < 6; ++m)
    if (std::abs(s.values()[m] - expected[m]) > 1e-6) return false;
  return true;
}

Outcome metric_fidelity() {
  using F = ArgumentFunction;
  const auto score = [](const ArgumentTree& p, const ArgumentTree& g) {
    const std::vector<DocCounts> d = {evaluate(p, g, true)};
    return aggregate(d);
  };
  int hand_ok = 0;
  hand_ok += scores_near(
      score(make_tree({0, 1, 1, 1, 2}, {F::kCc, F::kSupport, F::kSupport, F::kSupport, F::kAttack}),
            make_tree({0, 1, 1, 1, 1}, {F::kCc, F::kSupport, F::kSupport, F::kSupport, F::kSupport})),
      {100.0, 400.0 / 9.0, (100.0 + 600.0 / 7.0) / 3.0, 75.0, 75.0, 75.0});
  hand_ok += scores_near(score(make_tree({2, 0, 2}, {F::kSupport, F::kCc, F::kAttack}),
                               make_tree({0, 1, 2}, {F::kCc, F::kSupport, F::kAttack})),
                         {25.0, 100.0, 100.0 / 3.0, 50.0, 50.0, 50.0});
  hand_ok += scores_near(
      score(make_tree({0, 3, 1, 3}, {F::kCc, F::kSameArg, F::kAttack, F::kAttack}),
            make_tree({0, 1, 1, 3}, {F::kCc, F::kSameArg, F::kSupport, F::kAttack})),
      {100.0, 20.0, (100.0 + 200.0 / 3.0) / 3.0, 100.0, 100.0, 50.0});

  std::mt19937_64 rng(8);
  std::size_t self_failures = 0, order_violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + t % 10;
    const ArgumentTree gold = oracle::random_tree(rng, n);
    const ArgumentTree pred = oracle::random_tree(rng, n);
    for (double v : score(gold, gold).values()) self_failures += v == 100.0 ? 0 : 1;
    const Scores s = score(pred, gold);
    order_violations += s.las <= s.uas ? 0 : 1;
  }
  return {hand_ok == 3 && self_failures == 0 && order_violations == 0,
          fmt::format("hand cases {}/3; self-eval failures {}; LAS>UAS in {} of 1000", hand_ok,
                      self_failures, order_violations)};
}

Outcome agreement_sanity() {
  SyntheticConfig sc;
  sc.documents = 30;
  sc.variants_per_document = 2;
  sc.seed = 9;
  const Corpus corpus = make_synthetic_corpus(sc);
  std::size_t imperfect = 0;
  std::vector<AgreementGroup> groups;
  for (const auto& g : corpus.groups) {
    const RstDependencies deps = to_dependencies(corpus.rst.at(g.original.id));
    const AgreementReport self = pairwise_kappa(deps, deps);
    if (self.constituent != 1.0 || self.nuclearity != 1.0 || self.relation != 1.0) ++imperfect;
    AgreementGroup ag{g.original.id, {{g.original.id, corpus.language, deps}}};
    for (const auto& v : g.variants)
      ag.variants.push_back({v.id, corpus.language, to_dependencies(corpus.rst.at(v.id))});
    groups.push_back(std::move(ag));
  }
  const std::vector<double> kappas = {1.0, 0.0};
  const Moments m = moments(kappas);
  const bool aggregate_ok = std::abs(m.mean - 0.5) < 1e-12 && std::abs(m.std - 0.5) < 1e-12;
  const auto rows = corpus_agreement(groups);
  std::string logged;
  for (const auto& r : rows)
    logged += fmt::format("; logged variant agreement ({} pairs): avg {:.3f} ± {:.3f}", r.pairs,
                          r.avg.mean, r.avg.std);
  return {imperfect == 0 && aggregate_ok,
          fmt::format("identical pairs below 1.0: {}; {{1,0}} -> {:.2f} ± {:.2f}{}", imperfect,
                      m.mean, m.std, logged)};
}

Outcome micro_end_to_end() {
  const std::string dir = std::string(DISCARG_FIXTURE_DIR) + "/micro/";
  const auto loaded = load_arggraph_xml(dir + "micro_k002.xml");
  const ArgumentTree adu_tree = simplify_functions(loaded.tree);
  const RstNode rst = parse_rst_json(dir + "micro_k002.rst.json").root;
  const ArgumentTree gold =
      attach_same_arg(to_dependencies(rst), leaf_spans(rst), loaded.document.units, adu_tree);
  std::vector<std::size_t> same_arg_units;
  for (std::size_t i = 1; i <= gold.size(); ++i)
    if (gold.functions[i] == ArgumentFunction::kSameArg) same_arg_units.push_back(i);
  // A prediction that misattaches exactly the SameArg units.
  ArgumentTree pred = gold;
  pred.roles.clear();
  for (std::size_t u : same_arg_units) {
    for (int h = 1; h <= static_cast<int>(gold.size()); ++h) {
      if (h != static_cast<int>(u) && h != gold.heads[u]) {
        pred.heads[u] = h;
        break;
      }
    }
  }
  const DocCounts with = evaluate(pred, gold, true);
  const DocCounts without = evaluate(pred, gold, false);
  const std::size_t removed = without.attachments - with.attachments;
  const bool exact = same_arg_units.size() == 3 && removed == 3 && with.uas == with.attachments &&
                     without.uas + 3 == without.attachments;
  return {exact, fmt::format("{} SameArg arcs; exclusion removed {} attachments (UAS {}/{} -> {}/{})",
                             same_arg_units.size(), removed, without.uas, without.attachments,
                             with.uas, with.attachments)};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace discarg

int main() {
  using namespace discarg;
  const std::vector<Criterion> criteria = {
      {"gradient-correctness", gradient_correctness},
      {"decoder-oracle", decoder_oracle},
      {"role-oracle", role_oracle},
      {"frozen-coefficient-equivalence", frozen_equivalence},
      {"overfit", overfit},
      {"directional-benefit", directional_benefit},
      {"augmentation", augmentation},
      {"metric-fidelity", metric_fidelity},
      {"agreement-sanity", agreement_sanity},
      {"micro-end-to-end", micro_end_to_end},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    failures += o.pass ? 0 : 1;
    fmt::print("{} {}: {}\n", o.pass ? "PASS" : "FAIL", c.name, o.detail);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
