#include "onel1/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace onel1 {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_divisible(Eigen::Index rows, Eigen::Index cols, int levels) {
  if (levels < 0) throw std::invalid_argument("haar2d: negative level count");
  if (rows < 1 || cols < 1) throw std::invalid_argument("haar2d: empty image");
  const Eigen::Index div = Eigen::Index(1) << levels;
  if (rows % div != 0 || cols % div != 0) {
    throw std::invalid_argument(
        "haar2d: extents must be divisible by 2^levels");
  }
}

// One analysis step on the leading `len` entries of a row or column:
// pairwise sums into the first half, differences into the second.
void analyze_step(std::vector<double>& buf, int len) {
  std::vector<double> tmp(static_cast<size_t>(len));
  const int half = len / 2;
  for (int i = 0; i < half; ++i) {
    tmp[i] = (buf[2 * i] + buf[2 * i + 1]) * kInvSqrt2;
    tmp[half + i] = (buf[2 * i] - buf[2 * i + 1]) * kInvSqrt2;
  }
  for (int i = 0; i < len; ++i) buf[i] = tmp[i];
}

void synthesize_step(std::vector<double>& buf, int len) {
  std::vector<double> tmp(static_cast<size_t>(len));
  const int half = len / 2;
  for (int i = 0; i < half; ++i) {
    tmp[2 * i] = (buf[i] + buf[half + i]) * kInvSqrt2;
    tmp[2 * i + 1] = (buf[i] - buf[half + i]) * kInvSqrt2;
  }
  for (int i = 0; i < len; ++i) buf[i] = tmp[i];
}

template <typename Step>
void transform_block(Eigen::MatrixXd& m, int block_rows, int block_cols,
                     Step step, bool rows_first) {
  std::vector<double> buf(
      static_cast<size_t>(std::max(block_rows, block_cols)));
  auto do_rows = [&] {
    for (int i = 0; i < block_rows; ++i) {
      for (int j = 0; j < block_cols; ++j) buf[j] = m(i, j);
      step(buf, block_cols);
      for (int j = 0; j < block_cols; ++j) m(i, j) = buf[j];
    }
  };
  auto do_cols = [&] {
    for (int j = 0; j < block_cols; ++j) {
      for (int i = 0; i < block_rows; ++i) buf[i] = m(i, j);
      step(buf, block_rows);
      for (int i = 0; i < block_rows; ++i) m(i, j) = buf[i];
    }
  };
  if (rows_first) {
    do_rows();
    do_cols();
  } else {
    do_cols();
    do_rows();
  }
}

}  // namespace

Eigen::MatrixXd haar2d_forward(const Eigen::MatrixXd& image, int levels) {
  check_divisible(image.rows(), image.cols(), levels);
  Eigen::MatrixXd out = image;
  int br = static_cast<int>(image.rows());
  int bc = static_cast<int>(image.cols());
  for (int l = 0; l < levels; ++l) {
    transform_block(out, br, bc, analyze_step, /*rows_first=*/true);
    br /= 2;
    bc /= 2;
  }
  return out;
}

Eigen::MatrixXd haar2d_inverse(const Eigen::MatrixXd& coeffs, int levels) {
  check_divisible(coeffs.rows(), coeffs.cols(), levels);
  Eigen::MatrixXd out = coeffs;
  for (int l = levels - 1; l >= 0; --l) {
    const int br = static_cast<int>(coeffs.rows()) >> l;
    const int bc = static_cast<int>(coeffs.cols()) >> l;
    transform_block(out, br, bc, synthesize_step, /*rows_first=*/false);
  }
  return out;
}

WaveletTransform::WaveletTransform(int rows, int cols, int levels)
    : rows_(rows), cols_(cols), levels_(levels) {
  check_divisible(rows, cols, levels);
}

Eigen::MatrixXd WaveletTransform::forward(const Eigen::MatrixXd& image) const {
  if (image.rows() != rows_ || image.cols() != cols_) {
    throw std::invalid_argument("WaveletTransform::forward: shape mismatch");
  }
  return haar2d_forward(image, levels_);
}

Eigen::MatrixXd WaveletTransform::inverse(const Eigen::MatrixXd& coeffs) const {
  if (coeffs.rows() != rows_ || coeffs.cols() != cols_) {
    throw std::invalid_argument("WaveletTransform::inverse: shape mismatch");
  }
  return haar2d_inverse(coeffs, levels_);
}

Eigen::VectorXd WaveletTransform::flatten(const Eigen::MatrixXd& m) const {
  if (m.rows() != rows_ || m.cols() != cols_) {
    throw std::invalid_argument("WaveletTransform::flatten: shape mismatch");
  }
  Eigen::VectorXd v(size());
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) v[i * cols_ + j] = m(i, j);
  return v;
}

Eigen::MatrixXd WaveletTransform::unflatten(const Eigen::VectorXd& v) const {
  if (v.size() != size()) {
    throw std::invalid_argument("WaveletTransform::unflatten: size mismatch");
  }
  Eigen::MatrixXd m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = v[i * cols_ + j];
  return m;
}

}  // namespace onel1
