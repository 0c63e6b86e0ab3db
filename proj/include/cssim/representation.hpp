#ifndef CSSIM_REPRESENTATION_HPP
#define CSSIM_REPRESENTATION_HPP

#include <array>
#include <string>

#include "cssim/lie_algebra.hpp"

namespace cssim {

enum class ModelKind { csh_abelian, csh_adjoint_su2, csh_adjoint_su3, csd_abelian };

/// True for the Higgs models (second-order matter field from the start).
bool is_csh(ModelKind m);
/// True for models whose gauge algebra is u(1).
bool is_abelian(ModelKind m);
ModelKind model_from_string(const std::string& s);
std::string model_to_string(ModelKind m);

/// Unitary representation of the gauge algebra on the matter space V.
///
/// V is identified with C^{v_dim}; the inner product is the standard hermitian
/// form <z,w> = sum_i z_i conj(w_i) (linear in the first slot).  For the
/// adjoint models V = sl(n,C) in the orthonormal anti-hermitian basis of the
/// algebra, which makes tr(v w^dagger) the standard form on coefficients.
struct Representation {
  ModelKind model = ModelKind::csh_abelian;
  LieAlgebraData alg;
  int v_dim = 1;
  std::vector<Eigen::MatrixXcd> t_ops;  ///< infinitesimal action T^A on V

  bool has_dirac = false;
  std::array<Eigen::Matrix2cd, 3> gamma;  ///< gamma^0, gamma^1, gamma^2
  std::array<Eigen::Matrix2cd, 3> alpha;  ///< alpha^mu = gamma^0 gamma^mu
};

/// Builds the representation for a model; throws on algebra/model mismatch.
Representation build_representation(ModelKind model, const LieAlgebraData& alg);

/// Convenience: algebra + representation for a model in one call.
Representation build_model(ModelKind model);

/// Infinitesimal action sum_A a^A T^A v.
Eigen::VectorXcd act(const Eigen::VectorXd& a, const Eigen::VectorXcd& v,
                     const Representation& rep);

/// The antisymmetric g-valued bilinear form
/// <<v,w>>^A = (1/2)(<T^A v, w> + <w, T^A v>) = Re <T^A v, w>.
Eigen::VectorXd bbrk(const Eigen::VectorXcd& v, const Eigen::VectorXcd& w,
                     const Representation& rep);

/// Max residual of [T^A,T^B] = c_{AB}^C T^C over all pairs.
double representation_residual(const Representation& rep);
/// Max residual of T^A + (T^A)^dagger = 0.
double antihermiticity_residual(const Representation& rep);
/// Max residual of gamma^mu gamma^nu + gamma^nu gamma^mu = -2 eta^{mu nu} I.
double gamma_anticommutator_residual(const Representation& rep);

}  // namespace cssim

#endif
