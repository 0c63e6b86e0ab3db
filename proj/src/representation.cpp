#include "cssim/representation.hpp"

#include <stdexcept>

namespace cssim {

using Eigen::Matrix2cd;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using std::complex;

bool is_csh(ModelKind m) { return m != ModelKind::csd_abelian; }

bool is_abelian(ModelKind m) {
  return m == ModelKind::csh_abelian || m == ModelKind::csd_abelian;
}

ModelKind model_from_string(const std::string& s) {
  if (s == "csh_abelian") return ModelKind::csh_abelian;
  if (s == "csh_adjoint_su2") return ModelKind::csh_adjoint_su2;
  if (s == "csh_adjoint_su3") return ModelKind::csh_adjoint_su3;
  if (s == "csd_abelian") return ModelKind::csd_abelian;
  throw std::invalid_argument("unknown model: " + s);
}

std::string model_to_string(ModelKind m) {
  switch (m) {
    case ModelKind::csh_abelian: return "csh_abelian";
    case ModelKind::csh_adjoint_su2: return "csh_adjoint_su2";
    case ModelKind::csh_adjoint_su3: return "csh_adjoint_su3";
    case ModelKind::csd_abelian: return "csd_abelian";
  }
  return "?";
}

Representation build_representation(ModelKind model, const LieAlgebraData& alg) {
  const complex<double> I(0, 1);
  Representation rep;
  rep.model = model;
  rep.alg = alg;

  switch (model) {
    case ModelKind::csh_abelian:
    case ModelKind::csd_abelian: {
      if (alg.kind != AlgebraKind::u1)
        throw std::invalid_argument("abelian model needs u(1)");
      rep.v_dim = model == ModelKind::csd_abelian ? 2 : 1;
      rep.t_ops = {I * MatrixXcd::Identity(rep.v_dim, rep.v_dim)};
      break;
    }
    case ModelKind::csh_adjoint_su2:
    case ModelKind::csh_adjoint_su3: {
      int need_n = model == ModelKind::csh_adjoint_su2 ? 2 : 3;
      if (alg.kind != AlgebraKind::suN || alg.n != need_n)
        throw std::invalid_argument("adjoint model needs su(n) of matching n");
      // V = sl(n,C) in the orthonormal algebra basis; T^A v = [e_A, v] has
      // matrix entries (T^A)_{CB} = c_{AB}^C.
      rep.v_dim = alg.dim;
      rep.t_ops.assign(alg.dim, MatrixXcd::Zero(alg.dim, alg.dim));
      for (int A = 0; A < alg.dim; ++A)
        for (int B = 0; B < alg.dim; ++B)
          for (int C = 0; C < alg.dim; ++C)
            rep.t_ops[A](C, B) = alg.structure[C](A, B);
      break;
    }
  }

  if (model == ModelKind::csd_abelian) {
    rep.has_dirac = true;
    Matrix2cd g0, g1, g2;
    g0 << 1, 0, 0, -1;
    g1 << 0, 1, -1, 0;
    g2 << 0, -I, -I, 0;
    rep.gamma = {g0, g1, g2};
    for (int mu = 0; mu < 3; ++mu) rep.alpha[mu] = g0 * rep.gamma[mu];
  }
  return rep;
}

Representation build_model(ModelKind model) {
  switch (model) {
    case ModelKind::csh_abelian:
    case ModelKind::csd_abelian:
      return build_representation(model, build_lie_algebra(AlgebraKind::u1));
    case ModelKind::csh_adjoint_su2:
      return build_representation(model, build_lie_algebra(AlgebraKind::suN, 2));
    case ModelKind::csh_adjoint_su3:
      return build_representation(model, build_lie_algebra(AlgebraKind::suN, 3));
  }
  throw std::invalid_argument("bad model");
}

VectorXcd act(const VectorXd& a, const VectorXcd& v, const Representation& rep) {
  VectorXcd out = VectorXcd::Zero(rep.v_dim);
  for (int A = 0; A < rep.alg.dim; ++A)
    if (a[A] != 0) out += a[A] * (rep.t_ops[A] * v);
  return out;
}

VectorXd bbrk(const VectorXcd& v, const VectorXcd& w, const Representation& rep) {
  VectorXd out(rep.alg.dim);
  for (int A = 0; A < rep.alg.dim; ++A)
    out[A] = std::real(w.dot(rep.t_ops[A] * v));  // Re <T^A v, w>
  return out;
}

double representation_residual(const Representation& rep) {
  double r = 0;
  int d = rep.alg.dim;
  for (int A = 0; A < d; ++A)
    for (int B = 0; B < d; ++B) {
      MatrixXcd lhs = rep.t_ops[A] * rep.t_ops[B] - rep.t_ops[B] * rep.t_ops[A];
      for (int C = 0; C < d; ++C) lhs -= rep.alg.structure[C](A, B) * rep.t_ops[C];
      r = std::max(r, lhs.cwiseAbs().maxCoeff());
    }
  return r;
}

double antihermiticity_residual(const Representation& rep) {
  double r = 0;
  for (const auto& T : rep.t_ops)
    r = std::max(r, (T + T.adjoint()).cwiseAbs().maxCoeff());
  return r;
}

double gamma_anticommutator_residual(const Representation& rep) {
  if (!rep.has_dirac) return 0;
  const double eta_inv[3] = {-1, 1, 1};
  double r = 0;
  for (int mu = 0; mu < 3; ++mu)
    for (int nu = 0; nu < 3; ++nu) {
      Matrix2cd lhs = rep.gamma[mu] * rep.gamma[nu] + rep.gamma[nu] * rep.gamma[mu];
      if (mu == nu) lhs += 2.0 * eta_inv[mu] * Matrix2cd::Identity();
      r = std::max(r, lhs.cwiseAbs().maxCoeff());
    }
  return r;
}

}  // namespace cssim
