#include "onel1/operators.hpp"

#include <Eigen/Dense>
#include <Eigen/QR>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include "onel1/dct.hpp"

namespace onel1 {

namespace {

void validate_indices(int domain, const std::vector<int>& indices) {
  if (indices.empty()) {
    throw std::invalid_argument("SamplingMask: index set is empty");
  }
  if (static_cast<int>(indices.size()) > domain) {
    throw std::invalid_argument(
        "SamplingMask: more indices than domain entries");
  }
  int prev = -1;
  for (int idx : indices) {
    if (idx < 0 || idx >= domain) {
      throw std::invalid_argument("SamplingMask: index " +
                                  std::to_string(idx) + " out of range [0, " +
                                  std::to_string(domain) + ")");
    }
    if (idx <= prev) {
      throw std::invalid_argument(
          "SamplingMask: indices must be strictly increasing");
    }
    prev = idx;
  }
}

std::vector<int> draw_indices(int domain, int n, Rng& rng, bool force_dc) {
  if (n < 1 || n > domain) {
    throw std::invalid_argument("SamplingMask: need 1 <= n <= domain size");
  }
  std::vector<int> picked;
  if (force_dc) {
    // Sample n-1 from {1, ..., domain-1} and shift, keeping 0.
    picked = rng.sample_without_replacement(domain - 1, n - 1);
    for (int& idx : picked) ++idx;
    picked.insert(picked.begin(), 0);
  } else {
    picked = rng.sample_without_replacement(domain, n);
  }
  return picked;
}

}  // namespace

SamplingMask::SamplingMask(std::array<int, 2> shape, bool is_2d,
                           std::vector<int> indices)
    : shape_(shape), is_2d_(is_2d), indices_(std::move(indices)) {}

SamplingMask SamplingMask::make_1d(int length, std::vector<int> indices) {
  if (length < 1) {
    throw std::invalid_argument("SamplingMask: length must be positive");
  }
  validate_indices(length, indices);
  return SamplingMask({length, 1}, false, std::move(indices));
}

SamplingMask SamplingMask::make_2d(int rows, int cols,
                                   std::vector<int> indices) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("SamplingMask: extents must be positive");
  }
  validate_indices(rows * cols, indices);
  return SamplingMask({rows, cols}, true, std::move(indices));
}

SamplingMask SamplingMask::sample_uniform_1d(int length, int n, Rng& rng,
                                             bool force_dc) {
  return make_1d(length, draw_indices(length, n, rng, force_dc));
}

SamplingMask SamplingMask::sample_uniform_2d(int rows, int cols, int n,
                                             Rng& rng, bool force_dc) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("SamplingMask: extents must be positive");
  }
  return make_2d(rows, cols, draw_indices(rows * cols, n, rng, force_dc));
}

SamplingOperator::SamplingOperator(int n, int N) : n_(n), N_(N) {
  if (n < 1 || N < 1) {
    throw std::invalid_argument("SamplingOperator: dimensions must be positive");
  }
  if (n > N) {
    throw std::invalid_argument(
        "SamplingOperator: cannot have more measurements than unknowns (n <= N)");
  }
}

Eigen::VectorXd SamplingOperator::apply(const Eigen::VectorXd& x) const {
  if (x.size() != N_) {
    throw std::invalid_argument("apply: expected vector of length " +
                                std::to_string(N_) + ", got " +
                                std::to_string(x.size()));
  }
  apply_count_.fetch_add(1, std::memory_order_relaxed);
  return do_apply(x);
}

Eigen::VectorXd SamplingOperator::adjoint(const Eigen::VectorXd& z) const {
  if (z.size() != n_) {
    throw std::invalid_argument("adjoint: expected vector of length " +
                                std::to_string(n_) + ", got " +
                                std::to_string(z.size()));
  }
  adjoint_count_.fetch_add(1, std::memory_order_relaxed);
  return do_adjoint(z);
}

void SamplingOperator::reset_counters() const {
  apply_count_.store(0, std::memory_order_relaxed);
  adjoint_count_.store(0, std::memory_order_relaxed);
}

DenseMatrixOperator::DenseMatrixOperator(Eigen::MatrixXd A)
    : SamplingOperator(static_cast<int>(A.rows()), static_cast<int>(A.cols())),
      A_(std::move(A)) {}

Eigen::VectorXd DenseMatrixOperator::do_apply(const Eigen::VectorXd& x) const {
  return A_ * x;
}

Eigen::VectorXd DenseMatrixOperator::do_adjoint(
    const Eigen::VectorXd& z) const {
  return A_.transpose() * z;
}

namespace {

// Selected rows of the 1-D orthonormal DCT.
class PartialDct1dOperator final : public SamplingOperator {
 public:
  PartialDct1dOperator(int N, SamplingMask mask)
      : SamplingOperator(mask.count(), N), mask_(std::move(mask)) {}

 protected:
  Eigen::VectorXd do_apply(const Eigen::VectorXd& x) const override {
    Eigen::VectorXd coeffs = dct_forward(x);
    const auto& idx = mask_.indices();
    Eigen::VectorXd out(rows());
    for (int i = 0; i < rows(); ++i) out[i] = coeffs[idx[i]];
    return out;
  }

  Eigen::VectorXd do_adjoint(const Eigen::VectorXd& z) const override {
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(cols());
    const auto& idx = mask_.indices();
    for (int i = 0; i < rows(); ++i) coeffs[idx[i]] = z[i];
    return dct_inverse(coeffs);
  }

 private:
  SamplingMask mask_;
};

// Selected entries of the separable 2-D orthonormal DCT over a row-major
// flattened H x W domain.
class PartialDct2dOperator final : public SamplingOperator {
 public:
  explicit PartialDct2dOperator(SamplingMask mask)
      : SamplingOperator(mask.count(), mask.domain_size()),
        mask_(std::move(mask)) {}

 protected:
  Eigen::VectorXd do_apply(const Eigen::VectorXd& x) const override {
    const auto shape = mask_.domain_shape();
    Eigen::MatrixXd img(shape[0], shape[1]);
    for (int r = 0; r < shape[0]; ++r)
      for (int c = 0; c < shape[1]; ++c) img(r, c) = x[r * shape[1] + c];
    Eigen::MatrixXd coeffs = dct2_forward(img);
    const auto& idx = mask_.indices();
    Eigen::VectorXd out(rows());
    for (int i = 0; i < rows(); ++i) {
      out[i] = coeffs(idx[i] / shape[1], idx[i] % shape[1]);
    }
    return out;
  }

  Eigen::VectorXd do_adjoint(const Eigen::VectorXd& z) const override {
    const auto shape = mask_.domain_shape();
    Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(shape[0], shape[1]);
    const auto& idx = mask_.indices();
    for (int i = 0; i < rows(); ++i) {
      coeffs(idx[i] / shape[1], idx[i] % shape[1]) = z[i];
    }
    Eigen::MatrixXd img = dct2_inverse(coeffs);
    Eigen::VectorXd out(cols());
    for (int r = 0; r < shape[0]; ++r)
      for (int c = 0; c < shape[1]; ++c) out[r * shape[1] + c] = img(r, c);
    return out;
  }

 private:
  SamplingMask mask_;
};

// apply = sampler(W' x); adjoint = W(sampler'(z)).
class SynthesisOperator final : public SamplingOperator {
 public:
  SynthesisOperator(std::shared_ptr<const SamplingOperator> sampler,
                    const WaveletTransform& wavelet)
      : SamplingOperator(sampler->rows(), sampler->cols()),
        sampler_(std::move(sampler)),
        wavelet_(wavelet) {}

 protected:
  Eigen::VectorXd do_apply(const Eigen::VectorXd& x) const override {
    Eigen::MatrixXd coeffs = wavelet_.unflatten(x);
    Eigen::MatrixXd img = wavelet_.inverse(coeffs);
    return sampler_->apply(wavelet_.flatten(img));
  }

  Eigen::VectorXd do_adjoint(const Eigen::VectorXd& z) const override {
    Eigen::VectorXd img_flat = sampler_->adjoint(z);
    Eigen::MatrixXd img = wavelet_.unflatten(img_flat);
    return wavelet_.flatten(wavelet_.forward(img));
  }

 private:
  std::shared_ptr<const SamplingOperator> sampler_;
  WaveletTransform wavelet_;
};

}  // namespace

std::unique_ptr<SamplingOperator> make_partial_dct(int N,
                                                   const SamplingMask& mask) {
  if (mask.is_2d()) {
    if (mask.domain_size() != N) {
      throw std::invalid_argument(
          "make_partial_dct: mask domain does not match N");
    }
    return std::make_unique<PartialDct2dOperator>(mask);
  }
  if (mask.domain_shape()[0] != N) {
    throw std::invalid_argument(
        "make_partial_dct: mask domain does not match N");
  }
  return std::make_unique<PartialDct1dOperator>(N, mask);
}

std::unique_ptr<DenseMatrixOperator> make_row_orthonormal_gaussian(
    int n, int N, std::uint64_t seed) {
  if (n < 1 || N < 1 || n > N) {
    throw std::invalid_argument(
        "make_row_orthonormal_gaussian: need 1 <= n <= N");
  }
  Rng rng(seed);
  // Fill G (N x n) with i.i.d. N(0,1); the thin Q factor of G has orthonormal
  // columns, so A = Q' has orthonormal rows spanning a rotation-invariant
  // random subspace.
  Eigen::MatrixXd G(N, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < N; ++i) G(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(N, n);
  // Fix the sign convention so the factorization is deterministic.
  Eigen::MatrixXd R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (R(j, j) < 0) Q.col(j) = -Q.col(j);
  }
  return std::make_unique<DenseMatrixOperator>(Q.transpose());
}

std::unique_ptr<SamplingOperator> compose_synthesis_operator(
    std::shared_ptr<const SamplingOperator> sampler,
    const WaveletTransform& wavelet) {
  if (!sampler) {
    throw std::invalid_argument("compose_synthesis_operator: null sampler");
  }
  if (sampler->cols() != wavelet.size()) {
    throw std::invalid_argument(
        "compose_synthesis_operator: sampler domain (" +
        std::to_string(sampler->cols()) + ") does not match wavelet size (" +
        std::to_string(wavelet.size()) + ")");
  }
  return std::make_unique<SynthesisOperator>(std::move(sampler), wavelet);
}

Eigen::MatrixXd OrthonormalCompletion::phi() const {
  Eigen::MatrixXd full(A.rows() + B.rows(), A.cols());
  full.topRows(A.rows()) = A;
  full.bottomRows(B.rows()) = B;
  return full;
}

OrthonormalCompletion orthonormal_completion(const Eigen::MatrixXd& A_dense) {
  const int n = static_cast<int>(A_dense.rows());
  const int N = static_cast<int>(A_dense.cols());
  if (n < 1 || N < 1 || n > N) {
    throw std::invalid_argument("orthonormal_completion: need 1 <= n <= N");
  }
  if (N > 64) {
    throw std::invalid_argument(
        "orthonormal_completion: dense completion is limited to N <= 64");
  }
  const Eigen::MatrixXd gram = A_dense * A_dense.transpose();
  const double defect =
      (gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (defect > 1e-8) {
    throw std::invalid_argument(
        "orthonormal_completion: rows are not orthonormal (defect " +
        std::to_string(defect) + ")");
  }
  OrthonormalCompletion out;
  out.A = A_dense;
  if (n == N) {
    out.B = Eigen::MatrixXd(0, N);
    return out;
  }
  // Full QR of A': the trailing N-n columns of Q span the null space of A,
  // i.e. the orthonormal complement of the row space.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A_dense.transpose());
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(N, N);
  out.B = Q.rightCols(N - n).transpose();
  return out;
}

bool has_orthonormal_rows(const SamplingOperator& op, std::uint64_t seed,
                          double tol) {
  Rng rng(seed);
  Eigen::VectorXd z(op.rows());
  for (int i = 0; i < op.rows(); ++i) z[i] = rng.normal();
  const Eigen::VectorXd round_trip = op.apply(op.adjoint(z));
  const double scale = std::max(1.0, z.norm());
  return (round_trip - z).norm() <= tol * scale;
}

}  // namespace onel1
