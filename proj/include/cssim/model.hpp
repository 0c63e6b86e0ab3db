#ifndef CSSIM_MODEL_HPP
#define CSSIM_MODEL_HPP

#include <array>

#include "cssim/forms.hpp"
#include "cssim/state.hpp"

namespace cssim {

/// Coupling kappa and the mass parameter (v for the Higgs models, m for the
/// Dirac model).  couplings=false switches off the gauge field and potential
/// (free Klein-Gordon control mode).
struct ModelParams {
  double kappa = 1;
  double v_or_m = 1;
  bool couplings = true;
};

/// Mass-squared of the second-order matter equation: v^4/kappa^2 for the
/// Higgs models, m^2 for the squared Dirac equation.
double mass_sq(const ModelParams& p, ModelKind m);

using LieVec = Eigen::VectorXd;
using MultVec = Eigen::VectorXcd;

/// Matter current of the Higgs models: J(d_mu) = 2 <<phi, D_mu phi>>.
/// Dphi[mu] are the covariant derivative components (D_0 phi = pi in the
/// temporal gauge).
std::array<LieVec, 3> current_csh(const MultVec& phi, const std::array<MultVec, 3>& Dphi,
                                  const Representation& rep);

/// Dirac current J(d_mu) = <<psi, i alpha_mu psi>> with alpha_mu =
/// eta_{mu nu} gamma^0 gamma^nu; algebraic in psi.
std::array<LieVec, 3> current_csd(const MultVec& psi, const Representation& rep);

/// Self-dual Higgs potential, general contraction formula (cubic + quintic).
MultVec potential_csh(const MultVec& phi, const ModelParams& p, const Representation& rep);
/// Closed forms of the worked examples (abelian and adjoint); test oracle.
MultVec potential_csh_closed(const MultVec& phi, const ModelParams& p,
                             const Representation& rep);

/// U_CSD = (1/(2 kappa)) eps_{mu nu lambda} gamma^mu gamma^nu (J^lambda psi).
MultVec potential_csd(const MultVec& psi, const ModelParams& p, const Representation& rep);

/// Curvature coupling of the squared Dirac equation:
/// (1/2) gamma^mu gamma^nu F(T_mu, T_nu) psi, F given by its components
/// F[0]=F_01, F[1]=F_02, F[2]=F_12.
MultVec squared_dirac_source(const MultVec& psi, const std::array<LieVec, 3>& F,
                             const Representation& rep);

/// d_t psi isolated from the Dirac equation i gamma^mu D_mu psi + m psi = 0
/// in the temporal gauge: D_0 psi = -alpha^j D_j psi + i m gamma^0 psi.
MultVec csd_time_derivative(const MultVec& psi, const MultVec& D1psi, const MultVec& D2psi,
                            const ModelParams& p, const Representation& rep);

/// Dirac residual i gamma^mu D_mu psi + m psi (temporal gauge, D_0 = d_t).
MultVec dirac_residual(const MultVec& psi, const MultVec& dtpsi, const MultVec& D1psi,
                       const MultVec& D2psi, const ModelParams& p,
                       const Representation& rep);

/// Model-independent potential dispatch (U_CSH or U_CSD).
MultVec potential(const MultVec& phi, const ModelParams& p, const Representation& rep);

/// Right side N of (box - mass^2) phi = N in the temporal gauge:
/// N = -2 a_j d_j phi + b phi - a_j (a_j phi) + U(phi), component expansion.
MultVec kg_nonlinearity(const MultVec& phi, const MultVec& d1phi, const MultVec& d2phi,
                        const LieVec& a1, const LieVec& a2, const LieVec& b,
                        const ModelParams& p, const Representation& rep);

/// Same quantity assembled with the forms engine
/// (2 *(A ^ *d phi) + b phi + *(A ^ *(A phi)) + U); cross-validation oracle.
MultVec kg_nonlinearity_forms(const MultVec& phi, const MultVec& pi, const MultVec& d1phi,
                              const MultVec& d2phi, const LieVec& a1, const LieVec& a2,
                              const LieVec& b, const ModelParams& p,
                              const Representation& rep);

/// (dJ)_12 assembled from first derivatives only (the b-transport source is
/// -(dJ)_12 including the 1/kappa of the Chern-Simons relation).
LieVec dJ12(ModelKind kind, const MultVec& phi, const MultVec& pi, const MultVec& d1phi,
            const MultVec& d2phi, const LieVec& a1, const LieVec& a2,
            const ModelParams& p, const Representation& rep);

// ---- grid operations (finite differences on a state slice) ----

/// FD partial derivative of phi along axis (1 or 2); zero outside the halo.
MultVec fd_dphi(const SimState& s, int axis, int i, int j, Scheme scheme);
MultVec fd_dpi(const SimState& s, int axis, int i, int j, Scheme scheme);
/// FD partial of a connection component (field selects a1/a2/b).
LieVec fd_da(const SimState& s, const std::vector<double>& field, int axis, int i, int j,
             Scheme scheme);

/// Curvature component F_12 = d_1 a_2 - d_2 a_1 + [a_1, a_2] at a node.
LieVec curvature_f12(const SimState& s, int i, int j, Scheme scheme,
                     const Representation& rep);

/// Constraint residual (F - (1/kappa) *J)|_Sigma at a node: the dx1^dx2
/// component, using pi for the time leg of the current.
LieVec constraint_residual_at(const SimState& s, int i, int j, Scheme scheme,
                              const ModelParams& p, const Representation& rep);
/// Max norm and relative L2 of the constraint residual over the grid
/// (relative to the max of |F| and |*J/kappa|).
struct ConstraintReport {
  double max_abs = 0;
  double rel = 0;  ///< max_abs / max(field scale, tiny)
  double l2 = 0;
};
ConstraintReport constraint_residual(const SimState& s, Scheme scheme,
                                     const ModelParams& p, const Representation& rep);

/// b - delta A (spatial divergence check): delta A = -(d_1 a_1 + d_2 a_2).
LieVec b_consistency_at(const SimState& s, int i, int j, Scheme scheme);

/// Time-independent gauge transform U(x) = exp(chi(x) e_dir): matter fields
/// transform by the representation, a_j -> U a_j U^-1 - (d_j chi) e_dir, and
/// b -> delta A' assembled exactly from the supplied analytic derivatives of
/// chi (gradient and Laplacian), so the transform is pointwise exact.
SimState gauge_transform(const SimState& s, const std::vector<double>& chi,
                         const std::vector<double>& dchi1, const std::vector<double>& dchi2,
                         const std::vector<double>& lapchi, int dir,
                         const Representation& rep);

}  // namespace cssim

#endif
