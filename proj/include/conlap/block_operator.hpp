#pragma once

#include <Eigen/Core>
#include <complex>
#include <iosfwd>
#include <vector>

namespace conlap {

/// Block-sparse Hermitian operator over N fiber slots of size r.  Stores the
/// standard-inner-product Hermitian matrix B = S A S^{-1}, where A is the
/// assembled operator (self-adjoint for the weighted inner product with
/// weights alpha_i * mu_i) and S = diag(sqrt(alpha_i * mu_i)) per slot.
/// Eigenvalues of B and A coincide; `apply_raw`/`block_raw` recover A.
class BlockOperator {
 public:
  BlockOperator(int num_points, int block_size);

  int num_points() const { return num_points_; }
  int block_size() const { return block_size_; }
  Eigen::Index dim() const {
    return static_cast<Eigen::Index>(num_points_) * block_size_;
  }

  void set_scale(const Eigen::VectorXd& s);
  const Eigen::VectorXd& scale() const { return scale_; }

  void set_diagonal(int i, const Eigen::MatrixXcd& b);
  void add_off_diagonal(int i, int j, const Eigen::MatrixXcd& b);

  /// Hermitian-coordinate block (i, j); nullptr when absent from the pattern.
  const Eigen::MatrixXcd* block(int i, int j) const;
  /// Block of the underlying weighted-self-adjoint operator A.
  Eigen::MatrixXcd block_raw(int i, int j) const;

  std::size_t stored_off_diagonal() const;

  void matvec(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
  /// A u = S^{-1} B S u: the operator in its original (unscaled) coordinates.
  Eigen::VectorXcd apply_raw(const Eigen::VectorXcd& u) const;

  Eigen::MatrixXcd to_dense() const;
  BlockOperator shifted(double s) const;  // B + s*I

  /// Plain-text block-triplet export/import, 17-significant-digit decimals
  /// (lossless for IEEE doubles).
  void write_text(std::ostream& os) const;
  static BlockOperator read_text(std::istream& is);

  /// Set when the assembling scale regime held (4*covering < rho < r_inj).
  bool regime_ok = true;

 private:
  int num_points_;
  int block_size_;
  std::vector<Eigen::MatrixXcd> diag_;
  std::vector<std::vector<std::pair<int, Eigen::MatrixXcd>>> off_;
  Eigen::VectorXd scale_;
};

}  // namespace conlap
