#include "discarg/coefficients.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "discarg/agreement.hpp"
#include "discarg/errors.hpp"

namespace discarg {

std::vector<CoefficientValue> export_coefficients(const ModelParams& params,
                                                  const RelationInventory& inventory) {
  const Mode mode = params.config.mode;
  if (mode != Mode::kDbap6 && mode != Mode::kDbap7)
    fail(ErrorKind::kUnsupportedMode,
         fmt::format("coefficients are per-label only in dbap6/dbap7, not {}", to_string(mode)));
  if (static_cast<std::size_t>(params.theta.value.rows()) != inventory.k())
    fail(ErrorKind::kShape, fmt::format("model has {} directed labels, inventory {}",
                                        params.theta.value.rows(), inventory.k()));
  const bool split = mode == Mode::kDbap7;
  const Matrix& inv_theta = split ? params.theta_inv.value : params.theta.value;
  const double b_fwd = params.b_rst.value(0, 0);
  const double b_inv = split ? params.b_inv.value(0, 0) : b_fwd;
  std::vector<CoefficientValue> out;
  for (std::size_t l = 0; l < inventory.labels.size(); ++l) {
    const auto fwd = static_cast<Eigen::Index>(2 * l);
    CoefficientValue v;
    v.relation = inventory.labels[l];
    v.forward = std::max(0.0, params.theta.value(fwd, 0) + b_fwd);
    v.inverted = std::max(0.0, inv_theta(fwd + 1, 0) + b_inv);
    out.push_back(std::move(v));
  }
  return out;
}

std::string_view to_string(CoefficientBucket bucket) {
  switch (bucket) {
    case CoefficientBucket::kCompanion: return "companion";
    case CoefficientBucket::kOpposing: return "opposing";
    case CoefficientBucket::kVaguelyCorrelated: return "vaguely_correlated";
    case CoefficientBucket::kVaguelyOpposed: return "vaguely_opposed";
  }
  return "?";
}

CoefficientBucket bucket_for(double mean, double std) {
  if (std::abs(mean - 1.0) > std)
    return mean > 1.0 ? CoefficientBucket::kCompanion : CoefficientBucket::kOpposing;
  return mean >= 1.0 ? CoefficientBucket::kVaguelyCorrelated : CoefficientBucket::kVaguelyOpposed;
}

std::vector<CoefficientSummary> aggregate_coefficients(
    std::span<const std::vector<CoefficientValue>> exports) {
  if (exports.empty()) fail(ErrorKind::kEmptyReport, "no coefficient exports to aggregate");
  const std::size_t labels = exports.front().size();
  for (const auto& e : exports)
    if (e.size() != labels) fail(ErrorKind::kShape, "coefficient exports differ in size");
  std::vector<CoefficientSummary> out;
  for (std::size_t l = 0; l < labels; ++l) {
    for (auto dir : {RelationDirection::kForward, RelationDirection::kInverted}) {
      std::vector<double> values;
      for (const auto& e : exports) {
        if (e[l].relation != exports.front()[l].relation)
          fail(ErrorKind::kMapping, "coefficient exports use different inventories");
        values.push_back(dir == RelationDirection::kForward ? e[l].forward : e[l].inverted);
      }
      const Moments m = moments(values);
      CoefficientSummary s;
      s.relation = exports.front()[l].relation;
      s.direction = dir;
      s.mean = m.mean;
      s.std = m.std;
      s.bucket = bucket_for(m.mean, m.std);
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::string coefficients_tsv(std::span<const CoefficientSummary> rows) {
  std::string out = "relation\tdirection\tmean\tstd\tbucket\n";
  for (const auto& r : rows)
    out += fmt::format("{}\t{}\t{:.4f}\t{:.4f}\t{}\n", r.relation,
                       r.direction == RelationDirection::kForward ? "forward" : "inverted", r.mean,
                       r.std, to_string(r.bucket));
  return out;
}

}  // namespace discarg
