#include "discarg/argeval.hpp"

#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "discarg/agreement.hpp"
#include "discarg/errors.hpp"
#include "discarg/roles.hpp"

namespace discarg {

ClassCounts& ClassCounts::operator+=(const ClassCounts& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  return *this;
}

double f1(const ClassCounts& c) {
  if (c.empty()) return 100.0;
  return 100.0 * 2.0 * static_cast<double>(c.tp) / static_cast<double>(2 * c.tp + c.fp + c.fn);
}

double macro_f1(std::span<const ClassCounts> classes) {
  double total = 0.0;
  std::size_t used = 0;
  for (const auto& c : classes) {
    if (c.empty()) continue;
    total += f1(c);
    ++used;
  }
  return used == 0 ? 100.0 : total / static_cast<double>(used);
}

namespace {

void tally(std::span<ClassCounts> classes, int gold, int pred) {
  const int n = static_cast<int>(classes.size());
  if (gold == pred) {
    if (gold >= 0 && gold < n) ++classes[gold].tp;
    return;
  }
  if (gold >= 0 && gold < n) ++classes[gold].fn;
  if (pred >= 0 && pred < n) ++classes[pred].fp;
}

std::vector<Role> roles_of(const ArgumentTree& tree) {
  if (tree.has_roles()) return tree.roles;
  if (!is_single_root_tree(tree.heads)) return {};
  return infer_roles(tree).roles;
}

}  // namespace

DocCounts evaluate(const ArgumentTree& pred, const ArgumentTree& gold, bool exclude_same_arg) {
  if (pred.heads.size() != gold.heads.size() || pred.size() == 0)
    fail(ErrorKind::kArgument,
         fmt::format("cannot compare '{}' ({} units) with gold '{}' ({} units)", pred.doc_id,
                     pred.size(), gold.doc_id, gold.size()));
  if (!pred.has_functions() || !gold.has_functions())
    fail(ErrorKind::kArgument, "evaluation needs functions on both trees");
  const std::size_t n = gold.size();
  const auto pred_roles = roles_of(pred);
  const auto gold_roles = roles_of(gold);
  if (gold_roles.empty()) fail(ErrorKind::kArgument, "gold tree is not a single-rooted tree");

  DocCounts out;
  std::array<ClassCounts, 2> cc{};
  for (std::size_t i = 1; i <= n; ++i) {
    const int gh = gold.heads[i];
    const int ph = pred.heads[i];
    tally(cc, gh == 0 ? 0 : 1, ph == 0 ? 0 : 1);
    tally(out.ro, static_cast<int>(gold_roles[i]),
          pred_roles.empty() ? -1 : static_cast<int>(pred_roles[i]));

    if (exclude_same_arg && gold.functions[i] == ArgumentFunction::kSameArg) continue;
    tally(out.fu, static_cast<int>(gold.functions[i]), static_cast<int>(pred.functions[i]));
    if (gh != 0 && ph == gh) {
      ++out.at.tp;
    } else {
      if (gh != 0) ++out.at.fn;
      if (ph != 0) ++out.at.fp;
    }
    if (gh == 0) continue;
    ++out.attachments;
    if (ph == gh) {
      ++out.uas;
      if (pred.functions[i] == gold.functions[i]) ++out.las;
    }
  }
  out.cc = macro_f1(cc);
  return out;
}

Scores Scores::from_values(const std::array<double, 6>& v) {
  return Scores{v[0], v[1], v[2], v[3], v[4], v[5]};
}

Scores aggregate(std::span<const DocCounts> docs) {
  if (docs.empty()) fail(ErrorKind::kEmptyReport, "no documents to aggregate");
  std::array<ClassCounts, 2> ro{};
  std::array<ClassCounts, 3> fu{};
  ClassCounts at;
  std::size_t attachments = 0, uas = 0, las = 0;
  double cc = 0.0;
  for (const auto& d : docs) {
    cc += d.cc;
    for (std::size_t k = 0; k < ro.size(); ++k) ro[k] += d.ro[k];
    for (std::size_t k = 0; k < fu.size(); ++k) fu[k] += d.fu[k];
    at += d.at;
    attachments += d.attachments;
    uas += d.uas;
    las += d.las;
  }
  Scores s;
  s.cc = cc / static_cast<double>(docs.size());
  s.ro = macro_f1(ro);
  s.fu = macro_f1(fu);
  s.at = f1(at);
  const auto pct = [&](std::size_t k) {
    return attachments == 0 ? 100.0
                            : 100.0 * static_cast<double>(k) / static_cast<double>(attachments);
  };
  s.uas = pct(uas);
  s.las = pct(las);
  return s;
}

EvalReport make_report(std::string name, std::vector<Scores> folds) {
  if (folds.empty()) fail(ErrorKind::kEmptyReport, fmt::format("report '{}' has no folds", name));
  EvalReport r;
  r.name = std::move(name);
  r.folds = std::move(folds);
  std::array<double, 6> mean{}, std{};
  for (std::size_t m = 0; m < 6; ++m) {
    std::vector<double> column;
    for (const auto& f : r.folds) column.push_back(f.values()[m]);
    const Moments mo = moments(column);
    mean[m] = mo.mean;
    std[m] = mo.std;
  }
  r.mean = Scores::from_values(mean);
  r.std = Scores::from_values(std);
  return r;
}

TTest paired_ttest(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    fail(ErrorKind::kArgument, fmt::format("paired samples differ in size ({} vs {})", a.size(),
                                           b.size()));
  if (a.size() < 2) fail(ErrorKind::kArgument, "paired t-test needs at least two pairs");
  const std::size_t n = a.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) ss += std::pow(a[i] - b[i] - mean, 2);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  TTest out;
  out.df = n - 1;
  if (sd == 0.0) {
    out.degenerate = true;
    if (mean == 0.0) {
      out.t = 0.0;
      out.p = 1.0;
    } else {
      out.t = std::copysign(std::numeric_limits<double>::infinity(), mean);
      out.p = 0.0;
    }
    return out;
  }
  out.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  const boost::math::students_t dist(static_cast<double>(out.df));
  out.p = 2.0 * boost::math::cdf(dist, -std::abs(out.t));
  return out;
}

std::string significance_marker(double p) {
  if (p < 0.005) return "**";
  if (p < 0.05) return "*";
  return "";
}

namespace {

std::vector<std::vector<std::string>> report_cells(std::span<const EvalReport> reports) {
  if (reports.empty()) fail(ErrorKind::kEmptyReport, "no reports to render");
  std::vector<std::vector<std::string>> rows;
  const EvalReport& base = reports.front();
  for (std::size_t r = 0; r < reports.size(); ++r) {
    const EvalReport& rep = reports[r];
    std::vector<std::string> row = {rep.name};
    for (std::size_t m = 0; m < 6; ++m) {
      std::string marker;
      if (r > 0 && rep.folds.size() == base.folds.size() && rep.folds.size() >= 2) {
        std::vector<double> x, y;
        for (std::size_t f = 0; f < rep.folds.size(); ++f) {
          x.push_back(rep.folds[f].values()[m]);
          y.push_back(base.folds[f].values()[m]);
        }
        marker = significance_marker(paired_ttest(x, y).p);
      }
      row.push_back(fmt::format("{:.1f} ± {:.1f}{}", rep.mean.values()[m], rep.std.values()[m],
                                marker));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string report_tsv(std::span<const EvalReport> reports) {
  std::string out = "model";
  for (auto name : Scores::kNames) out += fmt::format("\t{}", name);
  out += '\n';
  for (const auto& row : report_cells(reports)) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "\t" : "") + row[c];
    out += '\n';
  }
  return out;
}

std::string report_markdown(std::span<const EvalReport> reports) {
  std::string out = "| model |";
  std::string rule = "|---|";
  for (auto name : Scores::kNames) {
    out += fmt::format(" {} |", name);
    rule += "---|";
  }
  out += '\n' + rule + '\n';
  for (const auto& row : report_cells(reports)) {
    out += '|';
    for (const auto& cell : row) out += ' ' + cell + " |";
    out += '\n';
  }
  return out;
}

}  // namespace discarg
