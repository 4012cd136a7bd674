#pragma once

#include <Eigen/Core>

namespace onel1 {

// Orthonormal DCT-II and its inverse (DCT-III), O(N log N).
// dct_forward preserves the l2 norm exactly in exact arithmetic:
// coefficient k of a length-N input v is
//   c_k = w_k * sum_j v_j cos(pi (2j+1) k / (2N)),  w_0 = sqrt(1/N),
//   w_k = sqrt(2/N) for k >= 1.
Eigen::VectorXd dct_forward(const Eigen::VectorXd& v);
Eigen::VectorXd dct_inverse(const Eigen::VectorXd& c);

// Separable 2-D versions (rows then columns), same normalization per axis.
Eigen::MatrixXd dct2_forward(const Eigen::MatrixXd& image);
Eigen::MatrixXd dct2_inverse(const Eigen::MatrixXd& coeffs);

}  // namespace onel1
