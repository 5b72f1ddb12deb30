#pragma once

#include <span>
#include <string>
#include <vector>

#include "discarg/corpus.hpp"
#include "discarg/rst.hpp"

namespace discarg {

struct AgreementReport {
  double constituent = 0.0;
  double nuclearity = 0.0;
  double relation = 0.0;
  double avg = 0.0;
  // Set when a dimension had chance agreement of exactly one.
  bool degenerate = false;
};

// Fleiss' kappa for categorical ratings; ratings[r][i] is rater r's
// category for item i. With chance agreement of one the result is 1.0 if
// observed agreement is perfect and 0.0 otherwise, and `degenerate` is set.
double fleiss_kappa(std::span<const std::vector<std::string>> ratings, bool* degenerate = nullptr);

// Each unit is an item rated by both structures on three dimensions: its
// head, the nuclearity of its incoming arc, and its (head, relation) pair.
AgreementReport pairwise_kappa(const RstDependencies& a, const RstDependencies& b);

bool identical_structure(const RstDependencies& a, const RstDependencies& b);

struct RstVariant {
  std::string doc_id;
  Language language = Language::kEn;
  RstDependencies deps;
};

// All RST variants collected for one argumentative text.
struct AgreementGroup {
  std::string source_doc_id;
  std::vector<RstVariant> variants;
};

struct Moments {
  double mean = 0.0;
  double std = 0.0;  // population
};

Moments moments(std::span<const double> values);

struct LanguageAgreement {
  Language language = Language::kEn;
  std::size_t pairs = 0;
  Moments constituent;
  Moments nuclearity;
  Moments relation;
  Moments avg;
  double constituent_one_frac = 0.0;
  double identical_frac = 0.0;
};

// Every unordered pair of same-language variants inside a group counts once.
std::vector<LanguageAgreement> corpus_agreement(std::span<const AgreementGroup> groups);

std::string agreement_tsv(std::span<const LanguageAgreement> rows);

}  // namespace discarg
