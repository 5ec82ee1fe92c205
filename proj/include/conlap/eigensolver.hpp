#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "conlap/block_operator.hpp"

namespace conlap {

struct EigenOptions {
  double tol = 1e-8;   // converged when ||Bv - lambda v|| <= tol * Lambda
  int max_iter = 0;    // matvec budget; 0 -> 10*k + 200
  std::uint64_t seed = 7;
  enum class Method { Auto, Lanczos, Dense } method = Method::Auto;
};

struct SpectrumResult {
  Eigen::VectorXd eigenvalues;     // ascending
  Eigen::MatrixXcd vectors;        // dim x k, orthonormal columns
  Eigen::VectorXd residual_norms;  // ||Bv - lambda v|| / Lambda per pair
  std::vector<bool> converged;
  int iterations = 0;              // matvecs spent (Lanczos path)
  std::string method;              // "lanczos" or "dense"
  /// Smallest Ritz value after each step of the first Krylov segment
  /// (non-increasing under full reorthogonalization).
  std::vector<double> smallest_ritz_history;
};

/// Upper bound on the largest eigenvalue magnitude from block-row sums of
/// Frobenius norms (Frobenius dominates the spectral norm, so this encloses
/// every Gershgorin-type disc).  Zero only for the zero matrix.
double gershgorin_upper_bound(const BlockOperator& op);

/// Smallest k eigenpairs of the Hermitian operator via Lanczos on the
/// reflected operator Lambda*I - B with full reorthogonalization and
/// deflation restarts (restarts recover eigenvalue multiplicities that a
/// single Krylov sequence cannot).  Dense fallback below dim <= 1200 when the
/// method is Auto.  Non-convergence yields converged = false flags on the
/// affected pairs, never an exception.
SpectrumResult smallest_eigenpairs(const BlockOperator& op, int k,
                                   const EigenOptions& opts = {});

/// Full spectrum by dense Hermitian eigendecomposition (tridiagonalization +
/// implicit QL/QR via Eigen's SelfAdjointEigenSolver); guard dim <= 2000.
SpectrumResult dense_reference_spectrum(const BlockOperator& op);

}  // namespace conlap
