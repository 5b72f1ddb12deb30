#include "discarg/adam.hpp"

#include <cmath>

#include <fmt/format.h>

#include "discarg/errors.hpp"

namespace discarg::nn {

Adam::Adam(AdamConfig config) : config_(std::move(config)) {
  if (config_.group_lrs.empty()) fail(ErrorKind::kArgument, "Adam needs at least one group");
  if (config_.beta1 < 0.0 || config_.beta1 >= 1.0 || config_.beta2 < 0.0 || config_.beta2 >= 1.0)
    fail(ErrorKind::kArgument, "Adam betas must lie in [0, 1)");
}

void Adam::step(std::span<Parameter* const> params) {
  ++step_;
  const double t = static_cast<double>(step_);
  const double c1 = 1.0 - std::pow(config_.beta1, t);
  const double c2 = 1.0 - std::pow(config_.beta2, t);
  for (Parameter* p : params) {
    if (!p->trainable) continue;
    if (p->group < 0 || static_cast<std::size_t>(p->group) >= config_.group_lrs.size())
      fail(ErrorKind::kArgument,
           fmt::format("parameter '{}' has unknown group {}", p->name, p->group));
    if (p->grad.rows() != p->value.rows() || p->grad.cols() != p->value.cols())
      fail(ErrorKind::kShape, fmt::format("gradient of '{}' has the wrong shape", p->name));
    const double lr = config_.group_lrs[static_cast<std::size_t>(p->group)];
    auto [it, inserted] = moments_.try_emplace(p->name);
    Moments& mo = it->second;
    if (inserted || mo.m.rows() != p->value.rows() || mo.m.cols() != p->value.cols()) {
      mo.m = Matrix::Zero(p->value.rows(), p->value.cols());
      mo.v = Matrix::Zero(p->value.rows(), p->value.cols());
    }
    mo.m = config_.beta1 * mo.m + (1.0 - config_.beta1) * p->grad;
    mo.v = config_.beta2 * mo.v + (1.0 - config_.beta2) * p->grad.cwiseProduct(p->grad);
    if (config_.weight_decay != 0.0) p->value *= 1.0 - lr * config_.weight_decay;
    p->value.array() -=
        lr * (mo.m.array() / c1) / ((mo.v.array() / c2).sqrt() + config_.eps);
    ++p->version;
  }
}

}  // namespace discarg::nn
