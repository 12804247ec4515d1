#include "cdafem/linalg.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace cdafem {

struct Factorization::Impl {
  FactorKind kind;
  Eigen::SparseLU<SpMat> lu;
  Eigen::SimplicialLDLT<SpMat> ldlt;
};

Factorization::Factorization(const SpMat& A, FactorKind kind)
    : impl_(std::make_unique<Impl>()), n_(static_cast<int>(A.rows())) {
  if (A.rows() != A.cols()) throw std::invalid_argument("factorize: matrix not square");
  impl_->kind = kind;
  if (kind == FactorKind::symmetric_spd) {
    impl_->ldlt.compute(A);
    if (impl_->ldlt.info() != Eigen::Success)
      throw NumericalError("factorize: LDLT failed (matrix singular or not SPD)");
  } else {
    impl_->lu.compute(A);
    if (impl_->lu.info() != Eigen::Success)
      throw NumericalError("factorize: singular pivot in sparse LU");
  }
}

Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

Eigen::VectorXd Factorization::solve(const Eigen::VectorXd& b) const {
  if (b.size() != n_) throw std::invalid_argument("solve: dimension mismatch");
  return impl_->kind == FactorKind::symmetric_spd ? impl_->ldlt.solve(b) : impl_->lu.solve(b);
}

void PatternReusingLU::factorize(const SpMat& A) {
  if (!analyzed_) {
    lu_.analyzePattern(A);
    analyzed_ = true;
  }
  lu_.factorize(A);
  if (lu_.info() != Eigen::Success) throw NumericalError("PatternReusingLU: factorization failed");
}

Eigen::VectorXd PatternReusingLU::solve(const Eigen::VectorXd& b) const {
  return lu_.solve(b);
}

Eigen::VectorXd cg_solve(const SpMat& A, const Eigen::VectorXd& b, double tol, int max_iter) {
  if (A.rows() != A.cols() || A.rows() != b.size())
    throw std::invalid_argument("cg_solve: dimension mismatch");
  const int n = static_cast<int>(A.rows());
  if (max_iter <= 0) max_iter = 10 * n;
  const double bnorm = b.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (bnorm == 0) return x;
  Eigen::VectorXd r = b, p = b;
  double rr = r.squaredNorm();
  for (int it = 0; it < max_iter; ++it) {
    if (std::sqrt(rr) <= tol * bnorm) return x;
    const Eigen::VectorXd Ap = A * p;
    const double pAp = p.dot(Ap);
    if (pAp <= 0)
      throw NumericalError("cg_solve: negative curvature encountered (matrix not SPD)");
    const double alpha = rr / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    const double rr_new = r.squaredNorm();
    p = r + (rr_new / rr) * p;
    rr = rr_new;
  }
  if (std::sqrt(rr) <= tol * bnorm) return x;
  throw NumericalError("cg_solve: no convergence within " + std::to_string(max_iter) +
                       " iterations");
}

}  // namespace cdafem
