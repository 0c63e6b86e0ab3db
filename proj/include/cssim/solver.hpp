#ifndef CSSIM_SOLVER_HPP
#define CSSIM_SOLVER_HPP

#include <functional>
#include <string>

#include "cssim/model.hpp"
#include "cssim/state.hpp"

namespace cssim {

/// Full description of an evolution run.
struct RunConfig {
  ModelKind model = ModelKind::csh_abelian;
  ModelParams params;

  double epsilon = 0.01;      ///< data amplitude
  double radius_R = 1;        ///< support radius of the matter profile
  std::string profile = "bump";

  int n = 256;                ///< grid points per axis
  double half_width = 10;     ///< box half-width L (h = 2L/n)

  double t_end = 10;
  double cfl_safety = 0.8;
  int diag_every = 10;        ///< diagnostics cadence in steps
  int project_every = 0;      ///< constraint re-projection cadence in steps (0 = off)

  std::string out_dir = "out";
  bool dump_state = false;
  unsigned long long rng = 0;

  SpatialGrid grid() const { return {n, 2 * half_width / n}; }
};

/// Worker count from CSSIM_THREADS (default 1, clamped to [1,64]).
int thread_count();

/// Stable explicit step for unit wave speed in two dimensions.
double cfl_dt(const SpatialGrid& g, double safety);

/// Constraint-satisfying initial data at t = 0: compactly supported matter
/// profile, spatial connection from an exact discrete curl-potential solve
/// (Picard iteration on the bracket term for non-abelian algebras), b = -div a.
SimState build_initial_data(const RunConfig& cfg, const Representation& rep,
                            Scheme scheme = Scheme::central4);
/// Variant reporting the number of fixed-point iterations spent on the
/// non-abelian bracket term (1 for a single linear solve).
SimState build_initial_data(const RunConfig& cfg, const Representation& rep, Scheme scheme,
                            int* picard_iters);

/// Solves (D_1^2 + D_2^2) chi = rho exactly for the grid-truncated centered
/// difference D (sparse factorization), so that a = (-D_2 chi, D_1 chi) has
/// discrete curl equal to rho to rounding.
std::vector<double> curl_potential(const SpatialGrid& g, const std::vector<double>& rho,
                                   Scheme scheme);

/// Time derivative of the reduced temporal-gauge system:
/// d_t phi = pi, d_t pi = lap phi - mass^2 phi - N,
/// d_t a = (J_2, -J_1)/kappa, d_t b = -(dJ)_12 / kappa.
/// out is overwritten (halo ring of width 2 gets zero rates).
void rhs(const SimState& s, const ModelParams& p, const Representation& rep,
         Scheme scheme, SimState& out);

/// Classical RK4 step (allocates scratch; see Stepper for the reusing driver).
SimState step_rk4(const SimState& s, double dt, const ModelParams& p,
                  const Representation& rep, Scheme scheme);

/// Reusable RK4 driver; throws on NaN/Inf after a step.
class Stepper {
 public:
  Stepper(ModelParams p, Representation rep, Scheme scheme)
      : p_(std::move(p)), rep_(std::move(rep)), scheme_(scheme) {}

  void step(SimState& s, double dt);

 private:
  ModelParams p_;
  Representation rep_;
  Scheme scheme_;
  SimState k_[4], tmp_;
};

struct EvolveReport {
  SimState state;   ///< final slice
  int steps = 0;
  double dt = 0;
};

/// Evolves from t = 0 to t_end with uniform steps; invokes on_slice for the
/// initial state and after every step.  Throws std::runtime_error when the
/// matter support reaches the boundary margin or a field stops being finite.
EvolveReport evolve(const RunConfig& cfg, const Representation& rep,
                    const std::function<void(const SimState&, int)>& on_slice = {},
                    Scheme scheme = Scheme::central4);

}  // namespace cssim

#endif
