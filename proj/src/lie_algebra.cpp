#include "cssim/lie_algebra.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace cssim {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using std::complex;

Eigen::VectorXd LieAlgebraData::bracket(const VectorXd& a, const VectorXd& b) const {
  VectorXd out = VectorXd::Zero(dim);
  for (const auto& e : c_nnz) out[e.C] += e.c * a[e.A] * b[e.B];
  return out;
}

namespace {

// Anti-hermitian traceless generators of su(n), then Gram-Schmidt under
// <a,b> = tr(a b^dagger).
std::vector<MatrixXcd> sun_basis(int n) {
  const complex<double> I(0, 1);
  std::vector<MatrixXcd> raw;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      MatrixXcd m = MatrixXcd::Zero(n, n);
      m(j, k) = 1;
      m(k, j) = -1;
      raw.push_back(m);
      m.setZero();
      m(j, k) = I;
      m(k, j) = I;
      raw.push_back(m);
    }
  for (int m = 1; m < n; ++m) {
    MatrixXcd d = MatrixXcd::Zero(n, n);
    for (int j = 0; j < m; ++j) d(j, j) = I;
    d(m, m) = -double(m) * I;
    raw.push_back(d);
  }

  std::vector<MatrixXcd> basis;
  for (MatrixXcd m : raw) {
    for (const auto& e : basis) m -= (m * e.adjoint()).trace() * e;
    double nrm = std::sqrt(std::real((m * m.adjoint()).trace()));
    if (nrm < 1e-12) continue;
    basis.push_back(m / nrm);
  }
  return basis;
}

}  // namespace

LieAlgebraData build_lie_algebra(AlgebraKind kind, int n) {
  LieAlgebraData g;
  g.kind = kind;
  if (kind == AlgebraKind::u1) {
    g.n = 1;
    g.dim = 1;
    g.basis = {MatrixXcd::Constant(1, 1, complex<double>(0, 1))};
    g.structure = {MatrixXd::Zero(1, 1)};
    g.metric = MatrixXd::Identity(1, 1);
    return g;
  }
  if (n < 2) throw std::invalid_argument("su(n) requires n >= 2");
  g.n = n;
  g.basis = sun_basis(n);
  g.dim = int(g.basis.size());

  g.metric = MatrixXd::Identity(g.dim, g.dim);
  g.structure.assign(g.dim, MatrixXd::Zero(g.dim, g.dim));
  for (int A = 0; A < g.dim; ++A)
    for (int B = 0; B < g.dim; ++B) {
      MatrixXcd comm = g.basis[A] * g.basis[B] - g.basis[B] * g.basis[A];
      for (int C = 0; C < g.dim; ++C) {
        double c = std::real((comm * g.basis[C].adjoint()).trace());
        if (std::abs(c) < 1e-13) c = 0;  // kill float dust
        g.structure[C](A, B) = c;
        if (c != 0) g.c_nnz.push_back({A, B, C, c});
      }
    }
  return g;
}

double antisymmetry_residual(const LieAlgebraData& g) {
  double r = 0;
  for (int C = 0; C < g.dim; ++C)
    r = std::max(r, (g.structure[C] + g.structure[C].transpose()).cwiseAbs().maxCoeff());
  return r;
}

double jacobi_residual(const LieAlgebraData& g) {
  double r = 0;
  for (int A = 0; A < g.dim; ++A)
    for (int B = 0; B < g.dim; ++B)
      for (int C = 0; C < g.dim; ++C)
        for (int E = 0; E < g.dim; ++E) {
          double s = 0;
          for (int D = 0; D < g.dim; ++D)
            s += g.structure[D](A, B) * g.structure[E](D, C) +
                 g.structure[D](B, C) * g.structure[E](D, A) +
                 g.structure[D](C, A) * g.structure[E](D, B);
          r = std::max(r, std::abs(s));
        }
  return r;
}

double biinvariance_residual(const LieAlgebraData& g) {
  // In the orthonormal basis this is antisymmetry of C <-> A in c_{CD}^A:
  // c_{CD}^{A'} delta^{DA} + c_{CD}^{A} delta^{DA'} = 0.
  double r = 0;
  for (int C = 0; C < g.dim; ++C)
    for (int D = 0; D < g.dim; ++D)
      for (int A = 0; A < g.dim; ++A)
        r = std::max(r, std::abs(g.structure[D](C, A) + g.structure[A](C, D)));
  return r;
}

}  // namespace cssim
