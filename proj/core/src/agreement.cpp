#include "discarg/agreement.hpp"

#include <cmath>
#include <map>

#include <fmt/format.h>

#include "discarg/errors.hpp"

namespace discarg {

double fleiss_kappa(std::span<const std::vector<std::string>> ratings, bool* degenerate) {
  if (degenerate) *degenerate = false;
  if (ratings.size() < 2) fail(ErrorKind::kArgument, "kappa needs at least two raters");
  const std::size_t items = ratings.front().size();
  for (const auto& r : ratings)
    if (r.size() != items) fail(ErrorKind::kArgument, "raters disagree on the item count");
  if (items == 0) fail(ErrorKind::kArgument, "kappa needs at least one item");

  const double raters = static_cast<double>(ratings.size());
  std::map<std::string, double> pooled;
  double observed = 0.0;
  for (std::size_t i = 0; i < items; ++i) {
    std::map<std::string, double> counts;
    for (const auto& r : ratings) counts[r[i]] += 1.0;
    double agreeing = 0.0;
    for (const auto& [category, c] : counts) {
      agreeing += c * (c - 1.0);
      pooled[category] += c;
    }
    observed += agreeing / (raters * (raters - 1.0));
  }
  observed /= static_cast<double>(items);

  double chance = 0.0;
  for (const auto& [category, c] : pooled) {
    const double p = c / (static_cast<double>(items) * raters);
    chance += p * p;
  }
  if (std::abs(1.0 - chance) < 1e-15) {
    if (degenerate) *degenerate = true;
    return std::abs(1.0 - observed) < 1e-15 ? 1.0 : 0.0;
  }
  return (observed - chance) / (1.0 - chance);
}

namespace {

struct Ratings {
  std::vector<std::string> constituent;
  std::vector<std::string> nuclearity;
  std::vector<std::string> relation;
};

Ratings rate(const RstDependencies& deps) {
  Ratings r;
  for (std::size_t i = 1; i <= deps.size(); ++i) {
    const int head = deps.heads[i];
    r.constituent.push_back(std::to_string(head));
    r.nuclearity.push_back(head == 0 ? "root" : std::string(to_string(deps.nuclearity[i])));
    r.relation.push_back(head == 0 ? "0:root"
                                   : fmt::format("{}:{}", head, deps.relations[i].label));
  }
  return r;
}

}  // namespace

AgreementReport pairwise_kappa(const RstDependencies& a, const RstDependencies& b) {
  if (a.size() != b.size())
    fail(ErrorKind::kArgument,
         fmt::format("structures cover {} and {} units", a.size(), b.size()));
  const Ratings ra = rate(a);
  const Ratings rb = rate(b);
  AgreementReport report;
  bool flag = false;
  const std::vector<std::string> c[2] = {ra.constituent, rb.constituent};
  report.constituent = fleiss_kappa(c, &flag);
  report.degenerate |= flag;
  const std::vector<std::string> nu[2] = {ra.nuclearity, rb.nuclearity};
  report.nuclearity = fleiss_kappa(nu, &flag);
  report.degenerate |= flag;
  const std::vector<std::string> re[2] = {ra.relation, rb.relation};
  report.relation = fleiss_kappa(re, &flag);
  report.degenerate |= flag;
  report.avg = (report.constituent + report.nuclearity + report.relation) / 3.0;
  return report;
}

bool identical_structure(const RstDependencies& a, const RstDependencies& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    if (a.heads[i] != b.heads[i]) return false;
    if (a.heads[i] == 0) continue;
    if (a.nuclearity[i] != b.nuclearity[i] || !(a.relations[i] == b.relations[i])) return false;
  }
  return true;
}

Moments moments(std::span<const double> values) {
  Moments m;
  if (values.empty()) return m;
  for (double v : values) m.mean += v;
  m.mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.std = std::sqrt(ss / static_cast<double>(values.size()));
  return m;
}

std::vector<LanguageAgreement> corpus_agreement(std::span<const AgreementGroup> groups) {
  struct Acc {
    std::vector<double> constituent, nuclearity, relation, avg;
    std::size_t constituent_one = 0;
    std::size_t identical = 0;
  };
  std::map<Language, Acc> by_language;
  for (const auto& group : groups) {
    for (std::size_t x = 0; x < group.variants.size(); ++x) {
      for (std::size_t y = x + 1; y < group.variants.size(); ++y) {
        const auto& a = group.variants[x];
        const auto& b = group.variants[y];
        if (a.language != b.language) continue;
        const AgreementReport r = pairwise_kappa(a.deps, b.deps);
        Acc& acc = by_language[a.language];
        acc.constituent.push_back(r.constituent);
        acc.nuclearity.push_back(r.nuclearity);
        acc.relation.push_back(r.relation);
        acc.avg.push_back(r.avg);
        if (r.constituent == 1.0) ++acc.constituent_one;
        if (identical_structure(a.deps, b.deps)) ++acc.identical;
      }
    }
  }
  if (by_language.empty())
    fail(ErrorKind::kEmptyReport, "no group holds two RST variants in the same language");
  std::vector<LanguageAgreement> out;
  for (const auto& [language, acc] : by_language) {
    LanguageAgreement row;
    row.language = language;
    row.pairs = acc.constituent.size();
    row.constituent = moments(acc.constituent);
    row.nuclearity = moments(acc.nuclearity);
    row.relation = moments(acc.relation);
    row.avg = moments(acc.avg);
    row.constituent_one_frac = static_cast<double>(acc.constituent_one) / row.pairs;
    row.identical_frac = static_cast<double>(acc.identical) / row.pairs;
    out.push_back(row);
  }
  return out;
}

std::string agreement_tsv(std::span<const LanguageAgreement> rows) {
  std::string out =
      "language\tconstituent_mean\tconstituent_std\tnuclearity_mean\tnuclearity_std\t"
      "relation_mean\trelation_std\tavg_mean\tavg_std\tconstituent_one_frac\t"
      "identical_frac\tpairs\n";
  for (const auto& r : rows)
    out += fmt::format("{}\t{:.4f}\t{:.4f}\t{:.4f}\t{:.4f}\t{:.4f}\t{:.4f}\t{:.4f}\t{:.4f}\t{:.4f}\t{:.4f}\t{}\n",
                       to_string(r.language), r.constituent.mean, r.constituent.std,
                       r.nuclearity.mean, r.nuclearity.std, r.relation.mean, r.relation.std,
                       r.avg.mean, r.avg.std, r.constituent_one_frac, r.identical_frac, r.pairs);
  return out;
}

}  // namespace discarg
