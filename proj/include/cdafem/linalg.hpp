#pragma once

#include <Eigen/Sparse>

#include <memory>
#include <stdexcept>

namespace cdafem {

using SpMat = Eigen::SparseMatrix<double>;

/// Numerical failure distinct from input validation errors; the CLI maps
/// these to exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class FactorKind { general_lu, symmetric_spd };

/// Reusable sparse direct factorization (LU with COLAMD, or LDLT with AMD
/// for SPD systems). Immutable after construction; concurrent solves are
/// permitted. Throws NumericalError on singular pivots.
class Factorization {
 public:
  Factorization(const SpMat& A, FactorKind kind = FactorKind::general_lu);
  ~Factorization();
  Factorization(Factorization&&) noexcept;
  Factorization& operator=(Factorization&&) noexcept;

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  int rows() const { return n_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_ = 0;
};

inline Factorization factorize(const SpMat& A, FactorKind kind = FactorKind::general_lu) {
  return Factorization(A, kind);
}

/// Sparse LU that keeps its symbolic analysis across numeric refactorizations
/// with an unchanged sparsity pattern (per-step convection updates).
class PatternReusingLU {
 public:
  void factorize(const SpMat& A);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  Eigen::SparseLU<SpMat> lu_;
  bool analyzed_ = false;
};

/// Conjugate gradients for SPD systems. Stops at relative residual `tol`;
/// throws NumericalError on negative curvature (indefinite matrix) or when
/// the iteration cap (default 10 * dimension) is exhausted.
Eigen::VectorXd cg_solve(const SpMat& A, const Eigen::VectorXd& b, double tol,
                         int max_iter = 0);

}  // namespace cdafem
