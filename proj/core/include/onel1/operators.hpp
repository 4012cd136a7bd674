#pragma once

#include <Eigen/Core>

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

#include "onel1/rng.hpp"
#include "onel1/wavelet.hpp"

namespace onel1 {

// Row selection into an N-point (or HxW, flattened row-major) transform.
// Indices are strictly increasing, unique and in range.
class SamplingMask {
 public:
  static SamplingMask make_1d(int length, std::vector<int> indices);
  static SamplingMask make_2d(int rows, int cols, std::vector<int> indices);

  // n indices drawn uniformly without replacement; force_dc pins index 0.
  static SamplingMask sample_uniform_1d(int length, int n, Rng& rng,
                                        bool force_dc = false);
  static SamplingMask sample_uniform_2d(int rows, int cols, int n, Rng& rng,
                                        bool force_dc = false);

  const std::vector<int>& indices() const { return indices_; }
  int count() const { return static_cast<int>(indices_.size()); }
  bool is_2d() const { return is_2d_; }
  // {length, 1} in 1-D, {rows, cols} in 2-D.
  std::array<int, 2> domain_shape() const { return shape_; }
  int domain_size() const { return shape_[0] * shape_[1]; }

 private:
  SamplingMask(std::array<int, 2> shape, bool is_2d, std::vector<int> indices);

  std::array<int, 2> shape_{};
  bool is_2d_ = false;
  std::vector<int> indices_;
};

// Matrix-free n x N linear map with adjoint. Call counters are atomic so
// concurrent solver runs over a shared operator stay consistent; apply and
// adjoint are reentrant.
class SamplingOperator {
 public:
  virtual ~SamplingOperator() = default;

  int rows() const { return n_; }  // measurements
  int cols() const { return N_; }  // signal length

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd adjoint(const Eigen::VectorXd& z) const;

  std::uint64_t apply_count() const { return apply_count_.load(); }
  std::uint64_t adjoint_count() const { return adjoint_count_.load(); }
  std::uint64_t operator_calls() const { return apply_count() + adjoint_count(); }
  void reset_counters() const;

 protected:
  SamplingOperator(int n, int N);
  virtual Eigen::VectorXd do_apply(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd do_adjoint(const Eigen::VectorXd& z) const = 0;

 private:
  int n_;
  int N_;
  mutable std::atomic<std::uint64_t> apply_count_{0};
  mutable std::atomic<std::uint64_t> adjoint_count_{0};
};

// Dense-matrix operator; rows need not be orthonormal. Exposes the matrix
// for completion and oracle use.
class DenseMatrixOperator : public SamplingOperator {
 public:
  explicit DenseMatrixOperator(Eigen::MatrixXd A);
  const Eigen::MatrixXd& matrix() const { return A_; }

 protected:
  Eigen::VectorXd do_apply(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd do_adjoint(const Eigen::VectorXd& z) const override;

 private:
  Eigen::MatrixXd A_;
};

// Masked rows of the orthonormal DCT (1-D or separable 2-D per the mask);
// AA' = I exactly since the selected rows stay orthonormal.
std::unique_ptr<SamplingOperator> make_partial_dct(int N,
                                                   const SamplingMask& mask);

// i.i.d. standard normal rows orthonormalized by QR; deterministic per seed.
std::unique_ptr<DenseMatrixOperator> make_row_orthonormal_gaussian(
    int n, int N, std::uint64_t seed);

// apply(x) = sampler.apply(wavelet synthesis of x); the adjoint is wavelet
// analysis of sampler.adjoint. Orthonormality of the synthesis preserves
// AA' = I.
std::unique_ptr<SamplingOperator> compose_synthesis_operator(
    std::shared_ptr<const SamplingOperator> sampler,
    const WaveletTransform& wavelet);

// Rows completing A to an orthonormal basis Phi = [A; B]. Small scale only.
struct OrthonormalCompletion {
  Eigen::MatrixXd A;    // n x N, the input
  Eigen::MatrixXd B;    // (N-n) x N, orthonormal complement of the row space
  Eigen::MatrixXd phi() const;  // [A; B], N x N
};

OrthonormalCompletion orthonormal_completion(const Eigen::MatrixXd& A_dense);

// One-shot AA' = I probe on a random vector (the solvers' entry check).
bool has_orthonormal_rows(const SamplingOperator& op, std::uint64_t seed,
                          double tol = 1e-6);

}  // namespace onel1
