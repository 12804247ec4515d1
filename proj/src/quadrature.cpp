#include "cdafem/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <map>
#include <stdexcept>
#include <vector>

namespace cdafem {

namespace {

QuadratureRule make_rule(std::vector<std::array<double, 4>> rows, int exactness) {
  QuadratureRule r;
  r.points.resize(rows.size(), 3);
  r.weights.resize(rows.size());
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    r.points(i, 0) = rows[i][0];
    r.points(i, 1) = rows[i][1];
    r.points(i, 2) = rows[i][2];
    r.weights(i) = rows[i][3];
  }
  r.exactness = exactness;
  return r;
}

// Appends the 3 (or 1) permutations of a symmetric orbit (a,b,b);
// w is the Dunavant weight normalized to sum 1, scaled here to area 1/2.
void orbit3(std::vector<std::array<double, 4>>& rows, double a, double b, double w) {
  rows.push_back({a, b, b, 0.5 * w});
  rows.push_back({b, a, b, 0.5 * w});
  rows.push_back({b, b, a, 0.5 * w});
}

void orbit6(std::vector<std::array<double, 4>>& rows, double a, double b, double c, double w) {
  rows.push_back({a, b, c, 0.5 * w});
  rows.push_back({a, c, b, 0.5 * w});
  rows.push_back({b, a, c, 0.5 * w});
  rows.push_back({b, c, a, 0.5 * w});
  rows.push_back({c, a, b, 0.5 * w});
  rows.push_back({c, b, a, 0.5 * w});
}

// Gauss rule from a symmetric tridiagonal Jacobi matrix (Golub-Welsch).
void golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag_sq, double mu0,
                  Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  const int n = static_cast<int>(diag.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) J(i, i) = diag(i);
  for (int i = 0; i + 1 < n; ++i) J(i, i + 1) = J(i + 1, i) = std::sqrt(offdiag_sq(i));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes = es.eigenvalues();
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v = es.eigenvectors()(0, i);
    weights(i) = mu0 * v * v;
  }
}

// Gauss-Legendre on [0,1].
void gauss_legendre01(int n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n), off(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) off(k - 1) = k * k / (4.0 * k * k - 1.0);
  golub_welsch(diag, off, 2.0, x, w);
  x = (x.array() + 1.0) / 2.0;
  w /= 2.0;
}

// Gauss-Jacobi with weight (1-t) on [0,1].
void gauss_jacobi10_01(int n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  Eigen::VectorXd diag(n), off(n > 1 ? n - 1 : 0);
  for (int k = 0; k < n; ++k) diag(k) = -1.0 / ((2.0 * k + 1.0) * (2.0 * k + 3.0));
  for (int k = 1; k < n; ++k) off(k - 1) = k * (k + 1.0) / ((2.0 * k + 1.0) * (2.0 * k + 1.0));
  golub_welsch(diag, off, 2.0, x, w);
  x = (x.array() + 1.0) / 2.0;
  w /= 4.0;  // absorbs (1-t)/2 * dt/2 under the interval map
}

// Conical product rule: exact for total degree 2n-1; all weights positive.
QuadratureRule conical_rule(int exactness) {
  const int n = (exactness + 2) / 2;  // 2n-1 >= exactness
  Eigen::VectorXd xi, wxi, eta, weta;
  gauss_legendre01(n, xi, wxi);
  gauss_jacobi10_01(n, eta, weta);
  QuadratureRule r;
  r.points.resize(n * n, 3);
  r.weights.resize(n * n);
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i, ++k) {
      const double x = xi(i) * (1.0 - eta(j));
      const double y = eta(j);
      r.points(k, 0) = 1.0 - x - y;
      r.points(k, 1) = x;
      r.points(k, 2) = y;
      r.weights(k) = wxi(i) * weta(j);
    }
  r.exactness = 2 * n - 1;
  return r;
}

QuadratureRule build(int degree) {
  std::vector<std::array<double, 4>> rows;
  switch (degree) {
    case 0:
    case 1:
      rows.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3, 0.5});
      return make_rule(rows, 1);
    case 2:
      orbit3(rows, 2.0 / 3, 1.0 / 6, 1.0 / 3);
      return make_rule(rows, 2);
    case 3:
    case 4:
      orbit3(rows, 0.108103018168070, 0.445948490915965, 0.223381589678011);
      orbit3(rows, 0.816847572980459, 0.091576213509771, 0.109951743655322);
      return make_rule(rows, 4);
    case 5:
      rows.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3, 0.5 * 0.225});
      orbit3(rows, 0.059715871789770, 0.470142064105115, 0.132394152788506);
      orbit3(rows, 0.797426985353087, 0.101286507323456, 0.125939180544827);
      return make_rule(rows, 5);
    case 6:
      orbit3(rows, 0.501426509658179, 0.249286745170910, 0.116786275726379);
      orbit3(rows, 0.873821971016996, 0.063089014491502, 0.050844906370207);
      orbit6(rows, 0.053145049844817, 0.310352451033784, 0.636502499121399, 0.082851075618374);
      return make_rule(rows, 6);
    default:
      return conical_rule(degree);
  }
}

}  // namespace

const QuadratureRule& quadrature(int min_exactness) {
  if (min_exactness > 10)
    throw std::invalid_argument("quadrature: exactness " + std::to_string(min_exactness) +
                                " not available (max 10)");
  static std::map<int, QuadratureRule> cache;
  auto it = cache.find(min_exactness);
  if (it == cache.end()) it = cache.emplace(min_exactness, build(min_exactness)).first;
  return it->second;
}

}  // namespace cdafem
