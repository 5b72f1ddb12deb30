// discarg-synth: writes a synthetic corpus (bundles plus RST trees) with a
// controlled share of RST arcs that coincide with the argument arcs.

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "discarg/errors.hpp"
#include "discarg/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic argument corpus with RST trees", "discarg-synth"};
  discarg::SyntheticConfig config;
  std::string language = "en";
  std::string corpus_dir;
  std::string rst_dir;
  app.add_option("--documents", config.documents, "Number of original documents")->capture_default_str();
  app.add_option("--min-units", config.min_units, "Fewest units per document")->capture_default_str();
  app.add_option("--max-units", config.max_units, "Most units per document")->capture_default_str();
  app.add_option("--rst-agreement", config.rst_agreement,
                 "Share of argument arcs mirrored by an RST dependency")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--attack-rate", config.attack_rate, "Probability that a non-root arc is an attack")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--variants", config.variants_per_document, "Paraphrase variants per document")
      ->capture_default_str();
  app.add_option("--edu-split-rate", config.edu_split_rate, "Probability that a unit spans two EDUs")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--language", language, "Document language")
      ->check(CLI::IsMember({"en", "ru"}))
      ->capture_default_str();
  app.add_option("--seed", config.seed, "Generator seed")->capture_default_str();
  app.add_option("--corpus-out", corpus_dir, "Directory for JSON bundles")->required();
  app.add_option("--rst-out", rst_dir, "Directory for RST trees")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    config.language = discarg::parse_language(language);
    const discarg::Corpus corpus = discarg::make_synthetic_corpus(config);
    discarg::save_corpus(corpus, corpus_dir, rst_dir);
    fmt::print("wrote {} documents\n", corpus.groups.size());
  } catch (const discarg::Error& e) {
    std::cerr << "error (" << discarg::to_string(e.kind()) << "): " << e.what() << "\n";
    return 3;
  }
  return 0;
}
