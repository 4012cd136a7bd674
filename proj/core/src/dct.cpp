#include "onel1/dct.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace onel1 {
namespace {

// FFTW planning is not thread-safe; executing a plan on fresh arrays via
// fftw_execute_r2r is. Plans are cached per transform length behind a mutex
// and created with FFTW_UNALIGNED so they accept any buffer.
struct DctPlans {
  fftw_plan forward = nullptr;   // REDFT10 (DCT-II, unnormalized)
  fftw_plan backward = nullptr;  // REDFT01 (DCT-III, unnormalized)
};

const DctPlans& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, DctPlans> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<double> in(static_cast<size_t>(n)), out(static_cast<size_t>(n));
    DctPlans p;
    p.forward = fftw_plan_r2r_1d(n, in.data(), out.data(), FFTW_REDFT10,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.backward = fftw_plan_r2r_1d(n, in.data(), out.data(), FFTW_REDFT01,
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
    it = cache.emplace(n, p).first;
  }
  return it->second;
}

void dct_forward_span(const double* in, double* out, int n) {
  std::vector<double> src(in, in + n), dst(static_cast<size_t>(n));
  fftw_execute_r2r(plans_for(n).forward, src.data(), dst.data());
  // REDFT10 output is 2 * sum_j v_j cos(...); rescale to the orthonormal
  // convention.
  const double s0 = 1.0 / (2.0 * std::sqrt(static_cast<double>(n)));
  const double sk = 1.0 / std::sqrt(2.0 * n);
  out[0] = dst[0] * s0;
  for (int k = 1; k < n; ++k) out[k] = dst[k] * sk;
}

void dct_inverse_span(const double* in, double* out, int n) {
  std::vector<double> src(static_cast<size_t>(n)), dst(static_cast<size_t>(n));
  const double s0 = 1.0 / std::sqrt(static_cast<double>(n));
  const double sk = 1.0 / std::sqrt(2.0 * n);
  src[0] = in[0] * s0;
  for (int k = 1; k < n; ++k) src[k] = in[k] * sk;
  fftw_execute_r2r(plans_for(n).backward, src.data(), dst.data());
  for (int j = 0; j < n; ++j) out[j] = dst[j];
}

void check_size(Eigen::Index n, const char* what) {
  if (n < 1) throw std::invalid_argument(std::string(what) + ": empty input");
}

}  // namespace

Eigen::VectorXd dct_forward(const Eigen::VectorXd& v) {
  check_size(v.size(), "dct_forward");
  Eigen::VectorXd out(v.size());
  dct_forward_span(v.data(), out.data(), static_cast<int>(v.size()));
  return out;
}

Eigen::VectorXd dct_inverse(const Eigen::VectorXd& c) {
  check_size(c.size(), "dct_inverse");
  Eigen::VectorXd out(c.size());
  dct_inverse_span(c.data(), out.data(), static_cast<int>(c.size()));
  return out;
}

Eigen::MatrixXd dct2_forward(const Eigen::MatrixXd& image) {
  check_size(image.size(), "dct2_forward");
  const int rows = static_cast<int>(image.rows());
  const int cols = static_cast<int>(image.cols());
  Eigen::MatrixXd out = image;
  std::vector<double> buf(static_cast<size_t>(std::max(rows, cols)));
  std::vector<double> res(buf.size());
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) buf[j] = out(i, j);
    dct_forward_span(buf.data(), res.data(), cols);
    for (int j = 0; j < cols; ++j) out(i, j) = res[j];
  }
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) buf[i] = out(i, j);
    dct_forward_span(buf.data(), res.data(), rows);
    for (int i = 0; i < rows; ++i) out(i, j) = res[i];
  }
  return out;
}

Eigen::MatrixXd dct2_inverse(const Eigen::MatrixXd& coeffs) {
  check_size(coeffs.size(), "dct2_inverse");
  const int rows = static_cast<int>(coeffs.rows());
  const int cols = static_cast<int>(coeffs.cols());
  Eigen::MatrixXd out = coeffs;
  std::vector<double> buf(static_cast<size_t>(std::max(rows, cols)));
  std::vector<double> res(buf.size());
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) buf[i] = out(i, j);
    dct_inverse_span(buf.data(), res.data(), rows);
    for (int i = 0; i < rows; ++i) out(i, j) = res[i];
  }
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) buf[j] = out(i, j);
    dct_inverse_span(buf.data(), res.data(), cols);
    for (int j = 0; j < cols; ++j) out(i, j) = res[j];
  }
  return out;
}

}  // namespace onel1
