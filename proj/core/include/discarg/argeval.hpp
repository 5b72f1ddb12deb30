#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discarg/corpus.hpp"

namespace discarg {

struct ClassCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  bool empty() const { return tp + fp + fn == 0; }
  ClassCounts& operator+=(const ClassCounts& o);
};

// F1 in percent; 100 for a class with no instances on either side.
double f1(const ClassCounts& counts);
// Mean F1 over classes that occur in gold or prediction (100 if none do).
double macro_f1(std::span<const ClassCounts> classes);

// Per-document tallies.
struct DocCounts {
  double cc = 0.0;                 // macro F1 over {central claim, other}, percent
  std::array<ClassCounts, 2> ro;   // pro, opp
  std::array<ClassCounts, 3> fu;   // cc, support, attack
  ClassCounts at;                  // directed non-root arcs
  std::size_t attachments = 0;     // units whose gold head is not the root
  std::size_t uas = 0;
  std::size_t las = 0;
};

// Compares a predicted tree with the gold tree over the same units. With
// `exclude_same_arg`, units whose gold function is SameArg are dropped from
// the arc, attachment, and function tallies.
DocCounts evaluate(const ArgumentTree& pred, const ArgumentTree& gold, bool exclude_same_arg);

struct Scores {
  double cc = 0.0;
  double ro = 0.0;
  double fu = 0.0;
  double at = 0.0;
  double uas = 0.0;
  double las = 0.0;

  static constexpr std::array<std::string_view, 6> kNames = {"cc", "ro", "fu", "at", "UAS", "LAS"};
  std::array<double, 6> values() const { return {cc, ro, fu, at, uas, las}; }
  static Scores from_values(const std::array<double, 6>& v);
};

// cc is averaged over documents; the other metrics pool their counts.
Scores aggregate(std::span<const DocCounts> docs);

struct EvalReport {
  std::string name;
  std::vector<Scores> folds;
  Scores mean;
  Scores std;  // population deviation across folds
};

EvalReport make_report(std::string name, std::vector<Scores> folds);

struct TTest {
  double t = 0.0;
  double p = 1.0;
  std::size_t df = 0;
  bool degenerate = false;  // the differences had zero variance
};

// Two-sided paired t-test.
TTest paired_ttest(std::span<const double> a, std::span<const double> b);

// "*" for p < 0.05, "**" for p < 0.005.
std::string significance_marker(double p);

// Table of reports with per-metric "mean ± std" cells. Rows after the
// first are tested against the first and carry significance markers.
std::string report_tsv(std::span<const EvalReport> reports);
std::string report_markdown(std::span<const EvalReport> reports);

}  // namespace discarg
