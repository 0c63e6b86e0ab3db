#ifndef CSSIM_LIE_ALGEBRA_HPP
#define CSSIM_LIE_ALGEBRA_HPP

#include <vector>
#include <Eigen/Dense>

namespace cssim {

enum class AlgebraKind { u1, suN };

/// Compact Lie algebra with an orthonormal basis under its bi-invariant metric.
///
/// For su(n) the basis consists of anti-hermitian traceless matrices,
/// Gram-Schmidt orthonormalized w.r.t. <a,b> = tr(a b^dagger); for u(1) the
/// single basis element is i with <ia,ib> = ab.  In the orthonormal basis the
/// metric is the identity and the structure constants c_{AB}^C are totally
/// antisymmetric.
struct LieAlgebraData {
  AlgebraKind kind = AlgebraKind::u1;
  int n = 1;    ///< matrix size (1 for u1)
  int dim = 1;  ///< real dimension of the algebra

  std::vector<Eigen::MatrixXcd> basis;  ///< dim anti-hermitian n x n matrices
  std::vector<Eigen::MatrixXd> structure;  ///< structure[C](A,B) = c_{AB}^C
  Eigen::MatrixXd metric;  ///< <e_A, e_B>; identity by construction

  /// Sparse list of nonzero structure constants (A, B, C, c_{AB}^C).
  struct CEntry { int A, B, C; double c; };
  std::vector<CEntry> c_nnz;

  bool abelian() const { return c_nnz.empty(); }

  /// Lie bracket in coefficients: [a, b]^C = c_{AB}^C a^A b^B.
  Eigen::VectorXd bracket(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
};

/// Builds u(1) or su(n), n >= 2.  Throws std::invalid_argument for n < 2.
LieAlgebraData build_lie_algebra(AlgebraKind kind, int n = 1);

/// Max residual of c_{AB}^C = -c_{BA}^C over all indices.
double antisymmetry_residual(const LieAlgebraData& g);
/// Max residual of the Jacobi identity over all (A,B,C,E).
double jacobi_residual(const LieAlgebraData& g);
/// Max residual of c_{CD}^{A'} d^{DA} + c_{CD}^{A} d^{DA'} = 0 (bi-invariance).
double biinvariance_residual(const LieAlgebraData& g);

}  // namespace cssim

#endif
