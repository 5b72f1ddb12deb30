#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "discarg/nnet.hpp"

namespace discarg::nn {

struct AdamConfig {
  // Learning rate per parameter group; Parameter::group indexes this list.
  std::vector<double> group_lrs = {1e-3};
  double beta1 = 0.9;
  double beta2 = 0.9;
  double eps = 1e-8;
  // Decoupled (AdamW-style) decay, scaled by each group's learning rate.
  double weight_decay = 0.0;
};

// Adam with bias correction. Moments are keyed by parameter name, so the
// same optimizer can step over freshly rebuilt parameter lists.
class Adam {
 public:
  explicit Adam(AdamConfig config);

  void step(std::span<Parameter* const> params);

  std::uint64_t steps() const { return step_; }
  const AdamConfig& config() const { return config_; }

 private:
  struct Moments {
    Matrix m;
    Matrix v;
  };

  AdamConfig config_;
  std::uint64_t step_ = 0;
  std::map<std::string, Moments> moments_;
};

}  // namespace discarg::nn
