#pragma once

#include <Eigen/Dense>

namespace aopt {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// The r x m variable of the group-lasso reformulation. Column i is the
// estimator weight vector x_i attached to design point i.
using EstimatorMatrix = Matrix;

}  // namespace aopt
