#ifndef CSSIM_GEOMETRY_HPP
#define CSSIM_GEOMETRY_HPP

#include <deque>
#include <Eigen/Dense>

#include "cssim/forms.hpp"
#include "cssim/state.hpp"

namespace cssim {

/// Point on the hyperboloidal polar chart: t = tau cosh y, r = tau sinh y.
struct HyperboloidalPoint {
  double tau = 1;
  double y = 0;
  double theta = 0;
};

/// Forward map; requires t > r >= 0 (inside the forward cone).
HyperboloidalPoint to_hyperboloidal(double t, double x1, double x2);
/// Inverse map to rectilinear coordinates (t, x1, x2).
std::array<double, 3> from_hyperboloidal(const HyperboloidalPoint& p);

/// Translation Killing field T_mu.
VectorValue translation_vector(int mu);
/// Lorentz Killing field Z_{mu nu} = x_mu d_nu - x_nu d_mu at a point.
VectorValue killing_vector(int mu, int nu, const std::array<double, 3>& x);
/// Scaling field S = x^mu d_mu.
VectorValue scaling_vector(const std::array<double, 3>& x);
/// Unit normal N = d_tau = S / tau; requires the point strictly inside the cone.
VectorValue normal_vector(const std::array<double, 3>& x);

/// Quadrature node on a truncated hyperboloid H_tau with weight for the
/// induced measure dsigma = tau^2 cosh y dy dtheta.
struct QuadNode {
  HyperboloidalPoint p;
  std::array<double, 3> x;  ///< rectilinear coordinates
  double w = 0;             ///< measure weight
};

/// Gauss-Legendre in y on (0, y_max), periodic trapezoid in theta.
std::vector<QuadNode> hyperboloid_quadrature(double tau, double y_max, int n_y,
                                             int n_theta);

/// Interpolated field data at an off-grid spacetime point.
struct InterpPoint {
  Eigen::VectorXcd phi, pi;
  Eigen::VectorXcd dphi1, dphi2;  ///< spatial partials of phi
  Eigen::VectorXd a1, a2, b;
  bool valid = false;
};

/// Ring buffer of evolution slices at uniform time spacing, supporting cubic
/// (4-point per axis) interpolation in space and time.
class SliceHistory {
 public:
  SliceHistory() = default;
  SliceHistory(int capacity, double dt) : capacity_(capacity), dt_(dt) {}

  /// Stores a slice; slices must arrive with uniformly increasing t.
  void push(SimState s);

  int size() const { return int(slices_.size()); }
  double dt() const { return dt_; }
  double t_front() const { return slices_.front().t; }
  double t_back() const { return slices_.back().t; }
  const SimState& slice(int k) const { return slices_[k]; }
  const SimState& latest() const { return slices_.back(); }

  /// True when t has a full 4-slice window and (x1,x2) a 4x4 spatial stencil.
  bool covers(double t, double x1, double x2) const;

  /// Cubic Lagrange interpolation of all state fields and the spatial
  /// partials of phi at (t, x1, x2).
  InterpPoint interpolate(double t, double x1, double x2) const;

 private:
  int capacity_ = 8;
  double dt_ = 0;
  std::deque<SimState> slices_;
};

}  // namespace cssim

#endif
