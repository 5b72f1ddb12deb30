#include "discarg/cross_validation.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <random>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "binary_io.hpp"
#include "discarg/errors.hpp"

namespace discarg {

std::vector<Fold> parse_splits(std::string_view text) {
  using nlohmann::json;
  std::vector<Fold> out;
  try {
    json j = json::parse(text);
    const json& folds = j.is_object() ? j.at("folds") : j;
    if (!folds.is_array()) fail(ErrorKind::kSplit, "splits must be an array of folds");
    for (std::size_t i = 0; i < folds.size(); ++i) {
      Fold f;
      f.id = folds[i].value("id", std::to_string(i));
      f.train = folds[i].at("train").get<std::vector<std::string>>();
      f.test = folds[i].at("test").get<std::vector<std::string>>();
      out.push_back(std::move(f));
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::kSplit, fmt::format("invalid splits: {}", e.what()));
  }
  if (out.empty()) fail(ErrorKind::kSplit, "splits define no folds");
  for (const auto& f : out) {
    std::set<std::string> train(f.train.begin(), f.train.end());
    for (const auto& t : f.test)
      if (train.count(t))
        fail(ErrorKind::kSplit, fmt::format("fold '{}' uses '{}' for training and test", f.id, t));
  }
  return out;
}

std::vector<Fold> load_splits(const std::string& path) {
  try {
    return parse_splits(detail::read_file(path));
  } catch (const Error& e) {
    fail(e.kind(), fmt::format("{}: {}", path, e.what()));
  }
}

std::string splits_to_json(std::span<const Fold> folds) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& f : folds) out.push_back({{"id", f.id}, {"train", f.train}, {"test", f.test}});
  return out.dump(2);
}

std::vector<Fold> make_folds(const Corpus& corpus, std::size_t k, std::uint64_t seed) {
  if (k < 2 || k > corpus.groups.size())
    fail(ErrorKind::kSplit, fmt::format("cannot make {} folds from {} documents", k,
                                        corpus.groups.size()));
  std::vector<std::string> ids;
  for (const auto& g : corpus.groups) ids.push_back(g.original.id);
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  std::vector<Fold> out(k);
  for (std::size_t f = 0; f < k; ++f) {
    out[f].id = std::to_string(f + 1);
    for (std::size_t i = 0; i < ids.size(); ++i) (i % k == f ? out[f].test : out[f].train).push_back(ids[i]);
  }
  return out;
}

void ModelSettings::apply(ModelConfig& config) const {
  config.dropout = dropout;
  config.arc_dim = arc_dim;
  config.tag_dim = tag_dim;
  config.ff_init_std = ff_init_std;
  config.freeze_coefficients = freeze_coefficients;
}

std::vector<const VariantGroup*> resolve_groups(const Corpus& corpus,
                                                const std::vector<std::string>& ids,
                                                const std::string& context) {
  std::vector<const VariantGroup*> out;
  for (const auto& id : ids) {
    const VariantGroup* g = corpus.find_group(id);
    if (!g) fail(ErrorKind::kSplit, fmt::format("{} references unknown document '{}'", context, id));
    out.push_back(g);
  }
  return out;
}

DevSplit split_dev(std::vector<const VariantGroup*> groups, double fraction, std::uint64_t seed,
                   std::size_t fold_index) {
  DevSplit out;
  if (fraction > 0.0 && groups.size() >= 2) {
    std::mt19937_64 rng(seed * 1000003ULL + fold_index);
    std::shuffle(groups.begin(), groups.end(), rng);
    const auto n_dev = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(groups.size()))), 1,
        groups.size() - 1);
    out.dev.assign(groups.end() - static_cast<std::ptrdiff_t>(n_dev), groups.end());
    groups.resize(groups.size() - n_dev);
  }
  out.train = std::move(groups);
  return out;
}

FoldResult run_fold(const Corpus& corpus, const Fold& fold, std::size_t fold_index,
                    const ExperimentConfig& config, const EmbeddingProvider& embeddings) {
  const std::string context = fmt::format("fold '{}'", fold.id);
  auto train_groups = resolve_groups(corpus, fold.train, context);
  const auto test_groups = resolve_groups(corpus, fold.test, context);
  if (train_groups.empty() || test_groups.empty())
    fail(ErrorKind::kSplit, fmt::format("fold '{}' has an empty side", fold.id));
  const DevSplit split = split_dev(std::move(train_groups), config.dev_fraction, config.seed, fold_index);

  const auto train_set = build_training_instances(split.train, corpus, config.pipeline, embeddings);
  const auto dev = build_test_instances(split.dev, corpus, config.pipeline, embeddings);
  const auto test = build_test_instances(test_groups, corpus, config.pipeline, embeddings);

  FoldResult out;
  out.fold_id = fold.id;
  out.train_instances = train_set.size();
  out.dev_instances = dev.size();
  out.test_instances = test.size();
  TrainConfig tc = config.train;
  tc.seed = config.train.seed + fold_index;
  ModelConfig mc = model_config(config.pipeline, corpus, embeddings.dim());
  config.model.apply(mc);
  ModelParams init = init_params(mc, config.seed + fold_index);
  out.training = train(std::move(init), train_set, dev, tc);

  std::vector<DocCounts> counts;
  for (const auto& inst : test) {
    ArgumentTree pred = parse_instance(out.training.params, inst, tc.decoding);
    counts.push_back(evaluate(pred, inst.gold, config.exclude_same_arg));
    out.predictions.push_back(std::move(pred));
  }
  out.scores = aggregate(counts);
  return out;
}

CrossValidationResult cross_validate(const Corpus& corpus, std::span<const Fold> folds,
                                     const ExperimentConfig& config,
                                     const EmbeddingProvider& embeddings) {
  if (folds.empty()) fail(ErrorKind::kSplit, "no folds to run");
  CrossValidationResult out;
  out.folds.resize(folds.size());
  const std::size_t jobs = std::max<std::size_t>(1, config.jobs);
  for (std::size_t start = 0; start < folds.size(); start += jobs) {
    const std::size_t end = std::min(folds.size(), start + jobs);
    if (jobs == 1) {
      out.folds[start] = run_fold(corpus, folds[start], start, config, embeddings);
      continue;
    }
    std::vector<std::future<FoldResult>> running;
    for (std::size_t f = start; f < end; ++f)
      running.push_back(std::async(std::launch::async, [&, f] {
        return run_fold(corpus, folds[f], f, config, embeddings);
      }));
    for (std::size_t f = start; f < end; ++f) out.folds[f] = running[f - start].get();
  }
  std::vector<Scores> scores;
  for (const auto& f : out.folds) scores.push_back(f.scores);
  out.report = make_report(config.name, std::move(scores));
  return out;
}

}  // namespace discarg
