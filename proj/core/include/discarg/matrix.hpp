#pragma once

#include <Eigen/Dense>

namespace discarg {

// Row-major so that flat storage matches the on-disk tensor layout.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

}  // namespace discarg
