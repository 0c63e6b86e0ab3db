#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cssim/representation.hpp"

using namespace cssim;
using std::complex;

namespace {

Eigen::VectorXcd random_multiplet(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = complex<double>(u(rng), u(rng));
  return v;
}

}  // namespace

TEST_CASE("u(1) is one-dimensional and abelian") {
  auto g = build_lie_algebra(AlgebraKind::u1);
  CHECK(g.dim == 1);
  CHECK(g.abelian());
  CHECK(g.metric(0, 0) == 1.0);
  CHECK(g.structure[0](0, 0) == 0.0);
  CHECK(g.basis[0](0, 0) == complex<double>(0, 1));
}

TEST_CASE("su(2) structure constants from brute-force commutators") {
  auto g = build_lie_algebra(AlgebraKind::suN, 2);
  CHECK(g.dim == 3);
  // Independent oracle: recompute every c_{AB}^C from the basis matrices
  // without going through the stored tensor.
  for (int A = 0; A < 3; ++A)
    for (int B = 0; B < 3; ++B) {
      Eigen::MatrixXcd comm = g.basis[A] * g.basis[B] - g.basis[B] * g.basis[A];
      for (int C = 0; C < 3; ++C) {
        double c = std::real((comm * g.basis[C].adjoint()).trace());
        CHECK(std::abs(g.structure[C](A, B) - c) < 1e-13);
      }
    }
  // Orthonormal anti-hermitian su(2) basis has |c_{12}^3| = sqrt(2); the
  // value is frozen from the standard basis e_A = (i/sqrt2) sigma_A, where
  // [e_1,e_2] = -sqrt2 e_3 up to basis ordering/sign.
  CHECK(std::abs(std::abs(g.structure[2](0, 1)) - std::sqrt(2.0)) < 1e-13);
}

TEST_CASE("algebra invariants under 1e-12 for u1, su2, su3") {
  for (auto g : {build_lie_algebra(AlgebraKind::u1),
                 build_lie_algebra(AlgebraKind::suN, 2),
                 build_lie_algebra(AlgebraKind::suN, 3)}) {
    CHECK(antisymmetry_residual(g) < 1e-12);
    CHECK(jacobi_residual(g) < 1e-12);
    CHECK(biinvariance_residual(g) < 1e-12);
    // orthonormality of the basis
    for (int A = 0; A < g.dim; ++A)
      for (int B = 0; B < g.dim; ++B) {
        double ip = std::real((g.basis[A] * g.basis[B].adjoint()).trace());
        CHECK(std::abs(ip - (A == B ? 1 : 0)) < 1e-12);
      }
  }
}

TEST_CASE("su(n) rejects n < 2") {
  CHECK_THROWS(build_lie_algebra(AlgebraKind::suN, 1));
}

TEST_CASE("representations: anti-hermitian, bracket-compatible") {
  for (auto m : {ModelKind::csh_abelian, ModelKind::csh_adjoint_su2,
                 ModelKind::csh_adjoint_su3, ModelKind::csd_abelian}) {
    auto rep = build_model(m);
    CHECK(antihermiticity_residual(rep) < 1e-12);
    CHECK(representation_residual(rep) < 1e-12);
    CHECK(gamma_anticommutator_residual(rep) == 0.0);
  }
}

TEST_CASE("abelian models act by multiplication with i") {
  auto rep = build_model(ModelKind::csh_abelian);
  CHECK(rep.v_dim == 1);
  Eigen::VectorXd a(1);
  a << 1;
  Eigen::VectorXcd v(1);
  v << complex<double>(2, 3);
  auto w = act(a, v, rep);
  CHECK(std::abs(w[0] - complex<double>(-3, 2)) < 1e-15);
}

TEST_CASE("gamma matrices of the standard representation") {
  auto rep = build_model(ModelKind::csd_abelian);
  CHECK(rep.has_dirac);
  CHECK(rep.gamma[0](0, 0) == 1.0);
  CHECK(rep.gamma[0](1, 1) == -1.0);
  CHECK(rep.gamma[1](0, 1) == 1.0);
  CHECK(rep.gamma[1](1, 0) == -1.0);
  CHECK(rep.gamma[2](0, 1) == complex<double>(0, -1));
  CHECK(rep.gamma[2](1, 0) == complex<double>(0, -1));
}

TEST_CASE("adjoint action equals the matrix commutator") {
  auto rep = build_model(ModelKind::csh_adjoint_su2);
  CHECK(rep.v_dim == 3);
  const auto& g = rep.alg;
  // act(e_A, e_B) in coefficients must match [e_A, e_B] re-expanded in the
  // matrix basis (brute-force commutator oracle).
  for (int A = 0; A < g.dim; ++A)
    for (int B = 0; B < g.dim; ++B) {
      Eigen::VectorXd a = Eigen::VectorXd::Zero(g.dim);
      a[A] = 1;
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(g.dim);
      v[B] = 1;
      auto got = act(a, v, rep);
      Eigen::MatrixXcd comm = g.basis[A] * g.basis[B] - g.basis[B] * g.basis[A];
      for (int C = 0; C < g.dim; ++C) {
        complex<double> want = (comm * g.basis[C].adjoint()).trace();
        CHECK(std::abs(got[C] - want) < 1e-12);
      }
    }
}

TEST_CASE("unitarity: <T^A v, w> + <v, T^A w> = 0 on random data") {
  std::mt19937_64 rng(12345);
  for (auto m : {ModelKind::csh_abelian, ModelKind::csh_adjoint_su2,
                 ModelKind::csh_adjoint_su3, ModelKind::csd_abelian}) {
    auto rep = build_model(m);
    for (int trial = 0; trial < 100; ++trial) {
      auto v = random_multiplet(rng, rep.v_dim);
      auto w = random_multiplet(rng, rep.v_dim);
      for (int A = 0; A < rep.alg.dim; ++A) {
        complex<double> s = w.dot(rep.t_ops[A] * v) + (rep.t_ops[A] * w).dot(v);
        CHECK(std::abs(s) < 1e-12);
      }
    }
  }
}

TEST_CASE("bbrk: antisymmetric, bilinear, matches the defining formula") {
  std::mt19937_64 rng(777);
  for (auto m : {ModelKind::csh_abelian, ModelKind::csh_adjoint_su2,
                 ModelKind::csd_abelian}) {
    auto rep = build_model(m);
    for (int trial = 0; trial < 50; ++trial) {
      auto v = random_multiplet(rng, rep.v_dim);
      auto w = random_multiplet(rng, rep.v_dim);
      auto vw = bbrk(v, w, rep);
      auto wv = bbrk(w, v, rep);
      CHECK((vw + wv).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(bbrk(Eigen::VectorXcd::Zero(rep.v_dim), w, rep).cwiseAbs().maxCoeff() == 0.0);
      // defining formula, evaluated independently per component
      for (int A = 0; A < rep.alg.dim; ++A) {
        Eigen::VectorXcd Tv = rep.t_ops[A] * v;
        complex<double> ip1 = w.dot(Tv);         // <T^A v, w>
        complex<double> ip2 = std::conj(ip1);    // <w, T^A v>
        CHECK(std::abs(vw[A] - 0.5 * std::real(ip1 + ip2)) < 1e-13);
      }
    }
  }
}
