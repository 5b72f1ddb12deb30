// discarg: command-line front end for corpus conversion, RST agreement,
// training, parsing, evaluation and coefficient export.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include "discarg/agreement.hpp"
#include "discarg/argeval.hpp"
#include "discarg/checkpoint.hpp"
#include "discarg/coefficients.hpp"
#include "discarg/corpus.hpp"
#include "discarg/cross_validation.hpp"
#include "discarg/encoder.hpp"
#include "discarg/errors.hpp"
#include "discarg/parser.hpp"
#include "discarg/pipeline.hpp"
#include "discarg/rst.hpp"
#include "discarg/synthetic.hpp"
#include "discarg/training.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitDivergence = 4;

// Raised for flag combinations CLI11 cannot express declaratively.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) discarg::fail(discarg::ErrorKind::kIo, fmt::format("cannot write '{}'", path));
    out << text;
    if (!out) discarg::fail(discarg::ErrorKind::kIo, fmt::format("cannot write '{}'", path));
  }
  fs::rename(tmp, target);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) discarg::fail(discarg::ErrorKind::kIo, fmt::format("cannot read '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string> kModes = {"bap", "dbap5", "dbap6", "dbap7"};
const std::vector<std::string> kSegmentations = {"gold", "e2e"};
const std::vector<std::string> kDecoders = {"mst", "greedy"};

struct PipelineOptions {
  std::string mode = "bap";
  std::string segmentation = "gold";
  bool augmented = false;

  void add(CLI::App* cmd) {
    cmd->add_option("--mode", mode, "Parser variant: bap, dbap5, dbap6 or dbap7")
        ->check(CLI::IsMember(kModes))
        ->capture_default_str();
    cmd->add_option("--segmentation", segmentation, "Unit segmentation: gold or e2e")
        ->check(CLI::IsMember(kSegmentations))
        ->capture_default_str();
    cmd->add_flag("--augmented", augmented, "Add paraphrase variants to the training data");
  }

  discarg::PipelineConfig config() const {
    return {discarg::parse_mode(mode), discarg::parse_segmentation(segmentation), augmented};
  }
};

// Options shared by every command that reads a corpus.
struct DataOptions {
  std::string corpus;
  std::string rst_dir;
  std::string embeddings;
  std::size_t dim = 64;
  std::uint64_t hash_seed = 0;

  void add(CLI::App* cmd, bool embeddings_options) {
    cmd->add_option("--corpus", corpus, "Directory of JSON document bundles")
        ->required()
        ->check(CLI::ExistingDirectory);
    cmd->add_option("--rst-dir", rst_dir, "Directory of <doc_id>.rst.json trees")
        ->check(CLI::ExistingDirectory);
    if (!embeddings_options) return;
    cmd->add_option("--embeddings", embeddings, "Unit embedding file (AEMB); hashed features if omitted")
        ->check(CLI::ExistingFile);
    cmd->add_option("--dim", dim, "Dimension of the hashed features")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--hash-seed", hash_seed, "Seed of the hashed features")->capture_default_str();
  }

  discarg::Corpus load() const { return discarg::load_corpus(corpus, rst_dir); }

  std::unique_ptr<discarg::EmbeddingProvider> provider() const {
    if (!embeddings.empty()) return discarg::FileEmbeddingProvider::open(embeddings);
    return std::make_unique<discarg::HashEmbeddingProvider>(dim, hash_seed);
  }

  ordered_json describe() const {
    if (!embeddings.empty()) return {{"kind", "file"}, {"path", embeddings}};
    return {{"kind", "hash"}, {"dim", dim}, {"seed", hash_seed}};
  }
};

// Model and optimization settings; defaults are the reference hyperparameters.
struct TrainOptions {
  discarg::TrainConfig train;
  discarg::ModelSettings settings;
  double dev_fraction = 0.15;
  std::string decode = "mst";

  void add(CLI::App* cmd) {
    cmd->add_option("--max-epochs", train.max_epochs, "Maximum training epochs")->capture_default_str();
    cmd->add_option("--patience", train.patience, "Early-stopping patience in epochs")
        ->capture_default_str();
    cmd->add_option("--batch-size", train.batch_size, "Documents per update")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--lr-encoder", train.lr_encoder, "Learning rate of the encoder group")
        ->capture_default_str();
    cmd->add_option("--lr-head", train.lr_head, "Learning rate of the scoring head")
        ->capture_default_str();
    cmd->add_option("--lr-coefficients", train.lr_coefficients,
                    "Learning rate of the discourse coefficients")
        ->capture_default_str();
    cmd->add_option("--weight-decay", train.weight_decay, "Decoupled weight decay")
        ->capture_default_str();
    cmd->add_option("--beta1", train.beta1, "Adam first-moment decay")->capture_default_str();
    cmd->add_option("--beta2", train.beta2, "Adam second-moment decay")->capture_default_str();
    cmd->add_option("--dropout", settings.dropout, "Dropout rate")->capture_default_str()->check(CLI::Range(0.0, 0.99));
    cmd->add_option("--arc-dim", settings.arc_dim, "Arc projection size")->capture_default_str();
    cmd->add_option("--tag-dim", settings.tag_dim, "Function projection size")->capture_default_str();
    cmd->add_option("--ff-init-std", settings.ff_init_std, "Standard deviation of projection weights")
        ->capture_default_str();
    cmd->add_flag("--freeze-coefficients", settings.freeze_coefficients,
                  "Keep discourse coefficients at their neutral value");
    cmd->add_option("--dev-fraction", dev_fraction, "Share of training documents held out for early stopping")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 0.9));
    cmd->add_option("--decode", decode, "Tree decoder: mst or greedy")
        ->check(CLI::IsMember(kDecoders))
        ->capture_default_str();
  }

  discarg::TrainConfig config() const {
    discarg::TrainConfig c = train;
    c.decoding = discarg::parse_decode_strategy(decode);
    return c;
  }

  discarg::ModelConfig model(const discarg::PipelineConfig& pc, const discarg::Corpus& corpus,
                             std::size_t d_lm) const {
    discarg::ModelConfig c = discarg::model_config(pc, corpus, d_lm);
    settings.apply(c);
    return c;
  }

  ordered_json describe() const {
    return {{"max_epochs", train.max_epochs},       {"patience", train.patience},
            {"batch_size", train.batch_size},       {"lr_encoder", train.lr_encoder},
            {"lr_head", train.lr_head},             {"lr_coefficients", train.lr_coefficients},
            {"weight_decay", train.weight_decay},   {"beta1", train.beta1},
            {"beta2", train.beta2},                 {"eps", train.eps},
            {"dev_fraction", dev_fraction},         {"decode", decode}};
  }
};

// ---------------------------------------------------------------- convert

struct ConvertOptions {
  std::vector<std::string> inputs;
  std::string out;
};

int run_convert(const ConvertOptions& o) {
  std::vector<std::string> files;
  for (const auto& input : o.inputs) {
    if (fs::is_directory(input)) {
      for (const auto& entry : fs::directory_iterator(input))
        if (entry.path().extension() == ".xml") files.push_back(entry.path().string());
    } else {
      files.push_back(input);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) discarg::fail(discarg::ErrorKind::kIo, "no XML files to convert");
  fs::create_directories(o.out);
  for (const auto& file : files) {
    const auto loaded = discarg::load_arggraph_xml(file);
    discarg::write_bundle({loaded.document, loaded.tree},
                          (fs::path(o.out) / (loaded.document.id + ".json")).string());
  }
  fmt::print("converted {} documents\n", files.size());
  return 0;
}

// ---------------------------------------------------------------- agree

struct AgreeOptions {
  DataOptions data;
  std::string out;
};

discarg::RstDependencies unit_dependencies(const discarg::Document& doc,
                                           const discarg::RstNode& tree) {
  if (discarg::leaf_count(tree) == doc.size()) return discarg::to_dependencies(tree);
  return discarg::to_dependencies(discarg::reduce_to_segmentation(tree, doc.units));
}

int run_agree(const AgreeOptions& o) {
  if (o.data.rst_dir.empty()) throw UsageError("agree requires --rst-dir");
  const discarg::Corpus corpus = o.data.load();
  std::vector<discarg::AgreementGroup> groups;
  for (const auto& g : corpus.groups) {
    discarg::AgreementGroup group{g.original.id, {}};
    const auto add = [&](const discarg::Document& doc) {
      const auto it = corpus.rst.find(doc.id);
      if (it == corpus.rst.end()) return;
      group.variants.push_back({doc.id, doc.language, unit_dependencies(doc, it->second)});
    };
    add(g.original);
    for (const auto& v : g.variants) add(v);
    groups.push_back(std::move(group));
  }
  const auto rows = discarg::corpus_agreement(groups);
  write_text(o.out, discarg::agreement_tsv(rows));
  return 0;
}

// ---------------------------------------------------------------- train

struct TrainCommand {
  DataOptions data;
  TrainOptions opts;
  PipelineOptions pipeline_options;
  std::uint64_t seed = 1;
  std::string splits;
  std::string fold;
  std::string out;
  std::string history;
};

std::vector<std::string> fold_side(const std::string& splits_path, const std::string& fold_id,
                                   bool train_side) {
  for (const auto& f : discarg::load_splits(splits_path))
    if (f.id == fold_id) return train_side ? f.train : f.test;
  discarg::fail(discarg::ErrorKind::kSplit,
                fmt::format("fold '{}' not found in '{}'", fold_id, splits_path));
}

std::string history_json(const discarg::TrainResult& result) {
  ordered_json epochs = ordered_json::array();
  for (const auto& e : result.history) {
    ordered_json row = {{"epoch", e.epoch}, {"train_loss", e.train_loss}};
    row["dev_uas"] = e.dev_uas ? ordered_json(*e.dev_uas) : ordered_json(nullptr);
    row["dev_las"] = e.dev_las ? ordered_json(*e.dev_las) : ordered_json(nullptr);
    epochs.push_back(row);
  }
  ordered_json out = {{"best_epoch", result.best_epoch}, {"steps", result.steps}, {"epochs", epochs}};
  return out.dump(2) + "\n";
}

int run_train(const TrainCommand& o) {
  if (o.splits.empty() != o.fold.empty()) throw UsageError("--splits and --fold must be given together");
  const discarg::PipelineConfig pipeline = o.pipeline_options.config();
  const discarg::Corpus corpus = o.data.load();
  const auto embeddings = o.data.provider();

  std::vector<std::string> ids;
  if (o.splits.empty()) {
    for (const auto& g : corpus.groups) ids.push_back(g.original.id);
  } else {
    ids = fold_side(o.splits, o.fold, /*train_side=*/true);
  }
  auto groups = discarg::resolve_groups(corpus, ids, "training set");
  const auto split = discarg::split_dev(std::move(groups), o.opts.dev_fraction, o.seed, 0);
  const auto train_set =
      discarg::build_training_instances(split.train, corpus, pipeline, *embeddings);
  const auto dev_set = discarg::build_test_instances(split.dev, corpus, pipeline, *embeddings);

  discarg::TrainConfig tc = o.opts.config();
  tc.seed = o.seed;
  const discarg::ModelConfig mc = o.opts.model(pipeline, corpus, embeddings->dim());

  const auto& inventory = discarg::RelationInventory::builtin(corpus.language);
  ordered_json meta = {
      {"inventory", {{"language", discarg::to_string(inventory.language)}, {"version", inventory.version}}},
      {"seed", o.seed},
      {"augmented", pipeline.augmented},
      {"hyperparameters", o.opts.describe()},
      {"embeddings", o.data.describe()},
      {"train_documents", split.train.size()},
      {"dev_documents", split.dev.size()}};

  discarg::TrainResult result;
  try {
    result = discarg::train(discarg::init_params(mc, o.seed), train_set, dev_set, tc);
  } catch (const discarg::DivergenceError& e) {
    discarg::save_checkpoint(o.out + ".last-good", discarg::to_checkpoint(e.last_good(), meta.dump()));
    throw;
  }
  meta["best_epoch"] = result.best_epoch;
  discarg::save_checkpoint(o.out, discarg::to_checkpoint(result.params, meta.dump()));
  write_text(o.history.empty() ? o.out + ".history.json" : o.history, history_json(result));

  const auto& best = result.history.at(result.best_epoch - 1);
  fmt::print("trained {} instances ({} dev documents), best epoch {}", train_set.size(),
             split.dev.size(), result.best_epoch);
  if (best.dev_las) fmt::print(", dev UAS {:.1f} LAS {:.1f}", *best.dev_uas, *best.dev_las);
  fmt::print("\n");
  return 0;
}

// ---------------------------------------------------------------- parse

struct ParseCommand {
  DataOptions data;
  std::string model;
  std::string out;
  std::string splits;
  std::string fold;
  std::string decode = "mst";
  bool scores = false;
};

// Uses the embedding source recorded at training time unless one is given.
std::unique_ptr<discarg::EmbeddingProvider> model_embeddings(const DataOptions& data,
                                                             const std::string& metadata_json) {
  if (!data.embeddings.empty()) return data.provider();
  const auto meta = nlohmann::json::parse(metadata_json);
  if (meta.contains("embeddings")) {
    const auto& e = meta["embeddings"];
    if (e.value("kind", "") == "hash")
      return std::make_unique<discarg::HashEmbeddingProvider>(e.at("dim").get<std::size_t>(),
                                                              e.at("seed").get<std::uint64_t>());
    if (e.value("kind", "") == "file")
      return discarg::FileEmbeddingProvider::open(e.at("path").get<std::string>());
  }
  return data.provider();
}

int run_parse(const ParseCommand& o) {
  if (o.splits.empty() != o.fold.empty()) throw UsageError("--splits and --fold must be given together");
  const discarg::Checkpoint checkpoint = discarg::load_checkpoint(o.model);
  const discarg::ModelParams params = discarg::from_checkpoint(checkpoint);
  const auto embeddings = model_embeddings(o.data, checkpoint.metadata_json);
  if (embeddings->dim() != params.config.d_lm)
    discarg::fail(discarg::ErrorKind::kShape,
                  fmt::format("model expects {}-dimensional units, embeddings have {}",
                              params.config.d_lm, embeddings->dim()));
  const discarg::Corpus corpus = o.data.load();
  const discarg::PipelineConfig pc{params.config.mode, params.config.segmentation, false};

  std::vector<const discarg::VariantGroup*> groups;
  if (o.splits.empty()) {
    for (const auto& g : corpus.groups) groups.push_back(&g);
  } else {
    groups = discarg::resolve_groups(corpus, fold_side(o.splits, o.fold, false), "test set");
  }
  const auto instances = discarg::build_test_instances(groups, corpus, pc, *embeddings);
  fs::create_directories(o.out);
  const auto strategy = discarg::parse_decode_strategy(o.decode);
  for (const auto& inst : instances) {
    const auto scored =
        discarg::score(params, inst.units, inst.rst ? &*inst.rst : nullptr);
    const auto tree = discarg::decode(scored, inst.doc_id, strategy);
    write_text((fs::path(o.out) / (inst.doc_id + ".json")).string(),
               discarg::parse_to_json(tree, o.scores ? &scored.modulated : nullptr) + "\n");
  }
  fmt::print("parsed {} documents\n", instances.size());
  return 0;
}

// ---------------------------------------------------------------- eval

struct EvalCommand {
  DataOptions data;
  TrainOptions opts;
  std::string pred;
  std::string name = "pred";
  std::string segmentation = "gold";
  std::string splits;
  std::size_t folds = 0;
  std::string configs = "bap";
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  bool include_same_arg = false;
  std::string format = "tsv";
  std::string out;
};

std::string render(const std::vector<discarg::EvalReport>& reports, const std::string& format) {
  return format == "md" ? discarg::report_markdown(reports) : discarg::report_tsv(reports);
}

int eval_predictions(const EvalCommand& o) {
  const discarg::Corpus corpus = o.data.load();
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(o.pred))
    if (entry.path().extension() == ".json") files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty())
    discarg::fail(discarg::ErrorKind::kEmptyReport, fmt::format("no parses in '{}'", o.pred));
  std::vector<discarg::DocCounts> counts;
  for (const auto& file : files) {
    const discarg::ArgumentTree pred = discarg::parse_from_json(read_text(file));
    const discarg::VariantGroup* group = corpus.find_group(pred.doc_id);
    if (!group)
      discarg::fail(discarg::ErrorKind::kReference,
                    fmt::format("parse '{}' has no gold document '{}'", file, pred.doc_id));
    const auto gold = discarg::gold_tree(group->original, group->gold, corpus,
                                         discarg::parse_segmentation(o.segmentation));
    counts.push_back(discarg::evaluate(pred, gold, !o.include_same_arg));
  }
  write_text(o.out, render({discarg::make_report(o.name, {discarg::aggregate(counts)})}, o.format));
  return 0;
}

discarg::PipelineConfig parse_experiment(const std::string& token,
                                         discarg::SegmentationMode segmentation) {
  discarg::PipelineConfig pc;
  pc.segmentation = segmentation;
  std::string mode = token;
  if (const auto plus = token.find('+'); plus != std::string::npos) {
    if (token.substr(plus + 1) != "aug")
      throw UsageError(fmt::format("unknown experiment suffix in '{}'", token));
    pc.augmented = true;
    mode = token.substr(0, plus);
  }
  if (std::find(kModes.begin(), kModes.end(), mode) == kModes.end())
    throw UsageError(fmt::format("unknown mode in experiment '{}'", token));
  pc.mode = discarg::parse_mode(mode);
  return pc;
}

int eval_cross_validation(const EvalCommand& o) {
  std::vector<discarg::PipelineConfig> experiments;
  std::vector<std::string> names;
  std::stringstream tokens(o.configs);
  for (std::string token; std::getline(tokens, token, ',');) {
    if (token.empty()) continue;
    experiments.push_back(parse_experiment(token, discarg::parse_segmentation(o.segmentation)));
    names.push_back(token);
  }
  if (experiments.empty()) throw UsageError("--configs names no experiment");
  const discarg::Corpus corpus = o.data.load();
  const auto embeddings = o.data.provider();
  const auto folds = o.splits.empty() ? discarg::make_folds(corpus, o.folds, o.seed)
                                      : discarg::load_splits(o.splits);
  std::vector<discarg::EvalReport> reports;
  for (std::size_t e = 0; e < experiments.size(); ++e) {
    discarg::ExperimentConfig config;
    config.name = names[e];
    config.pipeline = experiments[e];
    config.train = o.opts.config();
    config.model = o.opts.settings;
    config.train.seed = o.seed;
    config.dev_fraction = o.opts.dev_fraction;
    config.seed = o.seed;
    config.jobs = o.jobs;
    config.exclude_same_arg = !o.include_same_arg;
    reports.push_back(discarg::cross_validate(corpus, folds, config, *embeddings).report);
  }
  write_text(o.out, render(reports, o.format));
  return 0;
}

int run_eval(const EvalCommand& o) {
  const bool cv = !o.splits.empty() || o.folds > 0;
  if (o.pred.empty() == !cv) throw UsageError("eval needs either --pred or one of --splits/--folds");
  return cv ? eval_cross_validation(o) : eval_predictions(o);
}

// ---------------------------------------------------------------- export-coeffs

struct ExportCommand {
  std::vector<std::string> models;
  std::string inventory;
  std::string out;
};

discarg::RelationInventory checkpoint_inventory(const std::string& metadata_json) {
  const auto meta = nlohmann::json::parse(metadata_json);
  std::string language = "en";
  if (meta.contains("inventory")) language = meta["inventory"].value("language", language);
  return discarg::RelationInventory::builtin(discarg::parse_language(language));
}

int run_export(const ExportCommand& o) {
  std::vector<std::vector<discarg::CoefficientValue>> exports;
  for (const auto& path : o.models) {
    const auto checkpoint = discarg::load_checkpoint(path);
    const auto inventory = o.inventory.empty() ? checkpoint_inventory(checkpoint.metadata_json)
                                               : discarg::RelationInventory::load(o.inventory);
    exports.push_back(discarg::export_coefficients(discarg::from_checkpoint(checkpoint), inventory));
  }
  write_text(o.out, discarg::coefficients_tsv(discarg::aggregate_coefficients(exports)));
  return 0;
}

// ---------------------------------------------------------------- errors

void report_error(bool json, std::string_view kind, const std::string& message, int code) {
  if (json) {
    const ordered_json err = {{"error", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << err.dump() << "\n";
  } else {
    std::cerr << "error (" << kind << "): " << message << "\n";
  }
}


}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Argument structure parsing with discourse coefficients", "discarg"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json_errors = false;
  app.add_flag("--json-errors", json_errors, "Print errors as JSON objects on stderr");
  app.set_config("--config", "", "Read options from a key/value file; flags given on the command line win");

  ConvertOptions convert;
  auto* convert_cmd = app.add_subcommand("convert", "Convert argument-graph XML into JSON bundles");
  convert_cmd->add_option("--input", convert.inputs, "XML files or directories of XML files")
      ->required()
      ->check(CLI::ExistingPath);
  convert_cmd->add_option("--out", convert.out, "Output directory")->required();

  AgreeOptions agree;
  auto* agree_cmd = app.add_subcommand("agree", "Report RST agreement between document variants");
  agree.data.add(agree_cmd, false);
  agree_cmd->add_option("--out", agree.out, "Output file (stdout if omitted)");

  TrainCommand train;
  auto* train_cmd = app.add_subcommand("train", "Train a parser and write a checkpoint");
  train.data.add(train_cmd, true);
  train.pipeline_options.add(train_cmd);
  train.opts.add(train_cmd);
  train_cmd->add_option("--seed", train.seed, "Seed for initialization, shuffling and dev selection")
      ->capture_default_str();
  train_cmd->add_option("--splits", train.splits, "Fold definitions (JSON)")->check(CLI::ExistingFile);
  train_cmd->add_option("--fold", train.fold, "Train on the training side of this fold");
  train_cmd->add_option("--out", train.out, "Checkpoint path")->required();
  train_cmd->add_option("--history", train.history, "Training history path (default <out>.history.json)");

  ParseCommand parse;
  auto* parse_cmd = app.add_subcommand("parse", "Parse documents with a trained checkpoint");
  parse.data.add(parse_cmd, true);
  parse_cmd->add_option("--model", parse.model, "Checkpoint path")->required()->check(CLI::ExistingFile);
  parse_cmd->add_option("--splits", parse.splits, "Fold definitions (JSON)")->check(CLI::ExistingFile);
  parse_cmd->add_option("--fold", parse.fold, "Parse only the test side of this fold");
  parse_cmd->add_option("--decode", parse.decode, "Tree decoder: mst or greedy")
      ->check(CLI::IsMember(kDecoders))
      ->capture_default_str();
  parse_cmd->add_flag("--scores", parse.scores, "Include the arc score matrix in each parse");
  parse_cmd->add_option("--out", parse.out, "Output directory")->required();

  EvalCommand eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score parses or run a cross-validation experiment");
  eval.data.add(eval_cmd, true);
  eval.opts.add(eval_cmd);
  eval_cmd->add_option("--pred", eval.pred, "Directory of parse JSON files to score")
      ->check(CLI::ExistingDirectory);
  eval_cmd->add_option("--name", eval.name, "Row name for scored parses")->capture_default_str();
  eval_cmd->add_option("--segmentation", eval.segmentation, "Unit segmentation: gold or e2e")
      ->check(CLI::IsMember(kSegmentations))
      ->capture_default_str();
  eval_cmd->add_option("--splits", eval.splits, "Fold definitions (JSON)")->check(CLI::ExistingFile);
  eval_cmd->add_option("--folds", eval.folds, "Generate this many folds instead of --splits");
  eval_cmd->add_option("--configs", eval.configs,
                       "Comma-separated experiments, e.g. bap,bap+aug,dbap6+aug; the first is the baseline")
      ->capture_default_str();
  eval_cmd->add_option("--seed", eval.seed, "Seed for folds, initialization and shuffling")
      ->capture_default_str();
  eval_cmd->add_option("--jobs", eval.jobs, "Folds trained concurrently")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  eval_cmd->add_flag("--include-same-arg", eval.include_same_arg,
                     "Keep same-arg units in the attachment and function tallies");
  eval_cmd->add_option("--format", eval.format, "Report format: tsv or md")
      ->check(CLI::IsMember({"tsv", "md"}))
      ->capture_default_str();
  eval_cmd->add_option("--out", eval.out, "Output file (stdout if omitted)");

  ExportCommand exporter;
  auto* export_cmd = app.add_subcommand("export-coeffs", "Tabulate learned discourse coefficients");
  export_cmd->add_option("--model", exporter.models, "Checkpoint paths (one or more)")
      ->required()
      ->check(CLI::ExistingFile);
  export_cmd->add_option("--inventory", exporter.inventory, "Relation inventory file")
      ->check(CLI::ExistingFile);
  export_cmd->add_option("--out", exporter.out, "Output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    report_error(json_errors, "usage", e.what(), kExitUsage);
    return kExitUsage;
  }

  try {
    if (*convert_cmd) return run_convert(convert);
    if (*agree_cmd) return run_agree(agree);
    if (*train_cmd) return run_train(train);
    if (*parse_cmd) return run_parse(parse);
    if (*eval_cmd) return run_eval(eval);
    if (*export_cmd) return run_export(exporter);
  } catch (const UsageError& e) {
    report_error(json_errors, "usage", e.what(), kExitUsage);
    return kExitUsage;
  } catch (const discarg::Error& e) {
    const int code = e.kind() == discarg::ErrorKind::kDivergence ? kExitDivergence : kExitData;
    report_error(json_errors, discarg::to_string(e.kind()), e.what(), code);
    return code;
  } catch (const nlohmann::json::exception& e) {
    report_error(json_errors, "format", e.what(), kExitData);
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    report_error(json_errors, "io", e.what(), kExitData);
    return kExitData;
  }
  return kExitUsage;
}
