#pragma once

#include <Eigen/Core>

#include "hypoheat/linear_system.hpp"

namespace hypoheat::bench {

// Chain of n integrators driven through the first coordinate, with a small
// diagonal damping so the drift has a nonzero trace.
inline LinearSystem chain(int n) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  A.diagonal(-1).setOnes();
  A.diagonal().setConstant(-0.1);
  return validate_system(A, Eigen::MatrixXd::Identity(n, 1));
}

}  // namespace hypoheat::bench
