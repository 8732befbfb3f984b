#pragma once

// Matrix-form evaluation over a whole batch, used inside the trainers.
// Results agree with the per-sample forward()/jacobian() up to rounding but
// are not guaranteed bit-identical to them.

#include "nns/mlp.hpp"

#include <Eigen/Dense>

#include <vector>

namespace nns::detail {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct BatchActivations {
    std::vector<RowMatrix> acts;  ///< acts[0] = inputs, acts[k+1] = output of layer k (n x fan_out)
};

BatchActivations forward_all_batch(const Network& net, const Eigen::MatrixXd& inputs);

/// n x m outputs.
Eigen::MatrixXd evaluate_batch(const Network& net, const Eigen::MatrixXd& inputs);

/// Rows ordered sample-major: row i*m + o is d output_o(x_i) / d params.
/// `residual` (same row order) receives prediction - target when non-null.
Eigen::MatrixXd jacobian_batch(const Network& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd* targets,
                               Eigen::VectorXd* residual);

}  // namespace nns::detail
