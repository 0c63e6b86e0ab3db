#ifndef CSSIM_DIAGNOSTICS_HPP
#define CSSIM_DIAGNOSTICS_HPP

#include <string>
#include <vector>

#include "cssim/geometry.hpp"
#include "cssim/model.hpp"

namespace cssim {

/// Energy integral on the constant-time slice:
/// sum h^2 of (1/2)(|D_0 phi|^2 + |D_1 phi|^2 + |D_2 phi|^2 + mass^2 |phi|^2)
/// over nodes with a full derivative stencil.
double sigma_energy(const SimState& s, const ModelParams& p, const Representation& rep,
                    Scheme scheme = Scheme::central4);

/// Grid integral of the curvature component F_12, one value per algebra
/// basis direction.
std::vector<double> magnetic_charge(const SimState& s, const Representation& rep,
                                    Scheme scheme = Scheme::central4);

/// Pointwise decay amplitudes: sup over the grid of (1+t)|phi| and of
/// (1+t)|D phi| (all three covariant legs combined).
struct DecayRecord {
  double sup_phi = 0;
  double sup_dphi = 0;
};
DecayRecord decay_record(const SimState& s, const Representation& rep,
                         Scheme scheme = Scheme::central4);

/// Gauge-invariant scalars of one evolution slice, one diagnostics.csv row.
struct SliceDiagnostics {
  double t = 0;
  double sigma_energy = 0;
  std::vector<double> charge;    ///< per algebra component
  double constraint_max = 0;
  double constraint_l2 = 0;
  double b_consistency = 0;      ///< max |b - delta a| over interior nodes
  double sup_phi_decay = 0;      ///< sup (1+t)|phi|
  double sup_dphi_decay = 0;     ///< sup (1+t)|D phi|
  double dirac_resid_max = 0;    ///< first-order residual (Dirac model only)
};
SliceDiagnostics slice_diagnostics(const SimState& s, const ModelParams& p,
                                   const Representation& rep,
                                   Scheme scheme = Scheme::central4);

/// Quadrature resolution and truncation for hyperboloid integrals.
struct HyperboloidOptions {
  int n_y = 48;
  int n_theta = 64;
  double y_max = 0;  ///< 0 = as large as the history window allows
};

/// Field and covariant-derivative legs at an interpolated spacetime point.
struct CovariantPoint {
  Eigen::VectorXcd phi;
  Eigen::VectorXcd D0, D1, D2;  ///< covariant derivative legs (D_0 = pi)
  Eigen::VectorXd a1, a2;
  bool valid = false;
};
CovariantPoint covariant_point(const SliceHistory& h, double t, double x1, double x2,
                               const Representation& rep);

/// Largest y so that the truncated hyperboloid H_tau stays strictly inside
/// the interpolable window, shrunk by `margin` in both coordinates.
/// Throws std::out_of_range when tau itself is outside the window.
double hyperboloid_y_limit(const SliceHistory& h, double tau, double margin = 0);

/// Energy flux of the time translation through H_tau:
/// integral of (1/2) cosh y (|D_tau phi|^2 + |D_y phi / tau|^2)
///   - sinh y Re< D_y phi / tau, D_tau phi >
///   + (1/2) cosh y (|D_theta phi / (tau sinh y)|^2 + mass^2 |phi|^2)
/// with the measure tau^2 cosh y dy dtheta.
double hyperboloid_energy(const SliceHistory& h, double tau, const ModelParams& p,
                          const Representation& rep, const HyperboloidOptions& opt = {});

/// Weighted Lebesgue norm on the truncated H_tau with measure
/// dsigma / cosh y and integrand (cosh y)^weight_power phi; p in {2, inf}
/// (pass p_exp = 2 or 0 for the sup norm).
double weighted_norm(const SliceHistory& h, double tau, int p_exp, int weight_power,
                     const Representation& rep, const HyperboloidOptions& opt = {});

/// Ratio of the two sides of the covariant Klainerman-Sobolev inequality:
/// tau sup |cosh y phi|  over  sum_{k<=2} ||cosh y Z^(k) phi||_L2(dsigma/cosh y),
/// Z ranging over the Lorentz fields; 0 when the right side is ~0.
double ks_ratio(const SliceHistory& h, double tau, const Representation& rep,
                const HyperboloidOptions& opt = {});

/// |D_tau(tau cosh y phi)| + tau cosh y |phi| at a single ray point.
double ode_quantity(const SliceHistory& h, double tau, double y, double theta,
                    const Representation& rep);

/// Max over sample points and coordinate directions of
/// d_X |phi| - |D_X phi| (positive values violate the diamagnetic bound);
/// points with |phi| <= floor are skipped.
double diamagnetic_check(const SliceHistory& h,
                         const std::vector<std::array<double, 3>>& points,
                         const Representation& rep, double floor = 1e-10);

/// Randomized exact-derivative verification of the calculus and commutator
/// identities underlying the model; every residual is evaluated pointwise at
/// random base points inside the forward cone.
struct IdentityReport {
  struct Entry {
    std::string name;
    double max_resid = 0;
  };
  std::vector<Entry> entries;
  std::vector<std::string> skipped;  ///< bracket identities in abelian-only mode
  double tol = 1e-9;
  bool pass() const;
};
/// abelian_only restricts every trial to the u(1) models and skips the
/// identities whose content is the Lie bracket.
IdentityReport identity_suite(unsigned long long seed, int n_trials,
                              bool abelian_only = false);

}  // namespace cssim

#endif
