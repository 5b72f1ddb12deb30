#include "discarg/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>

#include <fmt/format.h>

#include "discarg/errors.hpp"

namespace discarg {

nn::AdamConfig adam_config(const TrainConfig& config) {
  nn::AdamConfig out;
  out.group_lrs = {config.lr_encoder, config.lr_head, config.lr_coefficients};
  out.beta1 = config.beta1;
  out.beta2 = config.beta2;
  out.eps = config.eps;
  out.weight_decay = config.weight_decay;
  return out;
}

ArgumentTree parse_instance(const ModelParams& params, const Instance& instance,
                            DecodeStrategy decoding) {
  const ScoredParse scored =
      score(params, instance.units, instance.rst ? &*instance.rst : nullptr);
  return decode(scored, instance.doc_id, decoding);
}

std::pair<double, double> attachment_scores(const ModelParams& params,
                                            std::span<const Instance> instances,
                                            DecodeStrategy decoding) {
  std::size_t total = 0, uas = 0, las = 0;
  for (const auto& inst : instances) {
    const ArgumentTree pred = parse_instance(params, inst, decoding);
    for (std::size_t i = 1; i <= inst.gold.size(); ++i) {
      ++total;
      if (pred.heads[i] != inst.gold.heads[i]) continue;
      ++uas;
      las += pred.functions[i] == inst.gold.functions[i];
    }
  }
  if (total == 0) return {0.0, 0.0};
  return {100.0 * static_cast<double>(uas) / static_cast<double>(total),
          100.0 * static_cast<double>(las) / static_cast<double>(total)};
}

TrainResult train(ModelParams params, std::span<const Instance> train_set,
                  std::span<const Instance> dev_set, const TrainConfig& config) {
  if (train_set.empty()) fail(ErrorKind::kArgument, "training set is empty");
  if (config.batch_size == 0) fail(ErrorKind::kArgument, "batch size must be positive");
  for (const auto& inst : train_set)
    if (params.config.mode != Mode::kBap && !inst.rst)
      fail(ErrorKind::kArgument,
           fmt::format("instance '{}' has no RST dependencies", inst.doc_id));

  nn::Adam adam(adam_config(config));
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  auto param_list = params.parameters();

  TrainResult result;
  result.params = params;
  std::optional<double> best_las;
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      for (nn::Parameter* p : param_list) p->zero_grad();
      double batch_loss = 0.0;
      try {
        for (std::size_t b = start; b < end; ++b) {
          const Instance& inst = train_set[order[b]];
          nn::Graph g;
          ForwardVars vars =
              forward(g, params, inst.units, inst.rst ? &*inst.rst : nullptr, true, &rng);
          nn::Var loss = parse_loss(g, vars, inst.gold);
          batch_loss += loss.value()(0, 0);
          g.backward(loss);
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kNumeric) throw;
        throw DivergenceError(
            fmt::format("training diverged at epoch {}: {}", epoch, e.what()), params);
      }
      if (!std::isfinite(batch_loss))
        throw DivergenceError(fmt::format("non-finite loss at epoch {}", epoch), params);
      const ModelParams before = params;
      adam.step(param_list);
      for (const nn::Parameter* p : param_list)
        if (!p->value.allFinite())
          throw DivergenceError(
              fmt::format("parameter '{}' became non-finite at epoch {}", p->name, epoch),
              before);
      ++result.steps;
      epoch_loss += batch_loss;
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = epoch_loss / static_cast<double>(train_set.size());
    if (!dev_set.empty()) {
      double uas = 0.0, las = 0.0;
      try {
        std::tie(uas, las) = attachment_scores(params, dev_set, config.decoding);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kNumeric) throw;
        throw DivergenceError(
            fmt::format("dev evaluation diverged at epoch {}: {}", epoch, e.what()), params);
      }
      record.dev_uas = uas;
      record.dev_las = las;
      if (!best_las || las > *best_las) {
        best_las = las;
        result.params = params;
        result.best_epoch = epoch;
        since_best = 0;
      } else {
        ++since_best;
      }
    } else {
      result.params = params;
      result.best_epoch = epoch;
    }
    result.history.push_back(record);
    if (config.stop_at_perfect_dev && record.dev_las && *record.dev_las >= 100.0) break;
    if (!dev_set.empty() && since_best >= config.patience) break;
  }
  return result;
}

}  // namespace discarg
