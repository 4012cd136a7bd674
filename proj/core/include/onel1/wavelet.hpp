#pragma once

#include <Eigen/Core>

namespace onel1 {

// Orthonormal separable 2-D Haar analysis. Level l transforms the
// top-left (rows/2^l) x (cols/2^l) block, rows first then columns, with
// 1/sqrt(2) averaging/differencing so the transform preserves the
// Frobenius norm. Extents must be divisible by 2^levels.
Eigen::MatrixXd haar2d_forward(const Eigen::MatrixXd& image, int levels);
Eigen::MatrixXd haar2d_inverse(const Eigen::MatrixXd& coeffs, int levels);

// Fixed-shape transform handle; levels == 0 is the identity.
class WaveletTransform {
 public:
  WaveletTransform(int rows, int cols, int levels);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int levels() const { return levels_; }
  int size() const { return rows_ * cols_; }

  Eigen::MatrixXd forward(const Eigen::MatrixXd& image) const;
  Eigen::MatrixXd inverse(const Eigen::MatrixXd& coeffs) const;

  // Row-major flattening between images and coefficient vectors.
  Eigen::VectorXd flatten(const Eigen::MatrixXd& m) const;
  Eigen::MatrixXd unflatten(const Eigen::VectorXd& v) const;

 private:
  int rows_;
  int cols_;
  int levels_;
};

}  // namespace onel1
