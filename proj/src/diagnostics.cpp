#include "cssim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cssim {

namespace {

int stencil_margin(Scheme scheme) { return scheme == Scheme::central4 ? 2 : 1; }

}  // namespace

double sigma_energy(const SimState& s, const ModelParams& p, const Representation& rep,
                    Scheme scheme) {
  const int n = s.grid.n, m = stencil_margin(scheme);
  const double msq = mass_sq(p, rep.model);
  double acc = 0;
  for (int i = m; i < n - m; ++i)
    for (int j = m; j < n - m; ++j) {
      MultVec phi = Eigen::Map<const MultVec>(s.phi_at(i, j), s.vd);
      MultVec pi = Eigen::Map<const MultVec>(s.pi_at(i, j), s.vd);
      LieVec a1 = Eigen::Map<const LieVec>(s.a1_at(i, j), s.gd);
      LieVec a2 = Eigen::Map<const LieVec>(s.a2_at(i, j), s.gd);
      MultVec d1 = fd_dphi(s, 1, i, j, scheme) + act(a1, phi, rep);
      MultVec d2 = fd_dphi(s, 2, i, j, scheme) + act(a2, phi, rep);
      acc += 0.5 * (pi.squaredNorm() + d1.squaredNorm() + d2.squaredNorm() +
                    msq * phi.squaredNorm());
    }
  return acc * s.grid.h * s.grid.h;
}

std::vector<double> magnetic_charge(const SimState& s, const Representation& rep,
                                    Scheme scheme) {
  const int n = s.grid.n, m = stencil_margin(scheme);
  LieVec q = LieVec::Zero(s.gd);
  for (int i = m; i < n - m; ++i)
    for (int j = m; j < n - m; ++j) q += curvature_f12(s, i, j, scheme, rep);
  q *= s.grid.h * s.grid.h;
  return std::vector<double>(q.data(), q.data() + q.size());
}

DecayRecord decay_record(const SimState& s, const Representation& rep, Scheme scheme) {
  const int n = s.grid.n, m = stencil_margin(scheme);
  DecayRecord r;
  for (int i = m; i < n - m; ++i)
    for (int j = m; j < n - m; ++j) {
      MultVec phi = Eigen::Map<const MultVec>(s.phi_at(i, j), s.vd);
      MultVec pi = Eigen::Map<const MultVec>(s.pi_at(i, j), s.vd);
      LieVec a1 = Eigen::Map<const LieVec>(s.a1_at(i, j), s.gd);
      LieVec a2 = Eigen::Map<const LieVec>(s.a2_at(i, j), s.gd);
      MultVec d1 = fd_dphi(s, 1, i, j, scheme) + act(a1, phi, rep);
      MultVec d2 = fd_dphi(s, 2, i, j, scheme) + act(a2, phi, rep);
      r.sup_phi = std::max(r.sup_phi, phi.norm());
      r.sup_dphi = std::max(r.sup_dphi, std::sqrt(pi.squaredNorm() + d1.squaredNorm() +
                                                  d2.squaredNorm()));
    }
  r.sup_phi *= 1 + s.t;
  r.sup_dphi *= 1 + s.t;
  return r;
}

SliceDiagnostics slice_diagnostics(const SimState& s, const ModelParams& p,
                                   const Representation& rep, Scheme scheme) {
  SliceDiagnostics d;
  d.t = s.t;
  d.sigma_energy = sigma_energy(s, p, rep, scheme);
  d.charge = magnetic_charge(s, rep, scheme);
  ConstraintReport cr = constraint_residual(s, scheme, p, rep);
  d.constraint_max = cr.max_abs;
  d.constraint_l2 = cr.l2;
  DecayRecord dec = decay_record(s, rep, scheme);
  d.sup_phi_decay = dec.sup_phi;
  d.sup_dphi_decay = dec.sup_dphi;
  const int n = s.grid.n, m = stencil_margin(scheme);
  for (int i = m; i < n - m; ++i)
    for (int j = m; j < n - m; ++j)
      d.b_consistency =
          std::max(d.b_consistency, b_consistency_at(s, i, j, scheme).cwiseAbs().maxCoeff());
  if (!is_csh(rep.model)) {
    for (int i = m; i < n - m; ++i)
      for (int j = m; j < n - m; ++j) {
        MultVec psi = Eigen::Map<const MultVec>(s.phi_at(i, j), s.vd);
        MultVec dt = Eigen::Map<const MultVec>(s.pi_at(i, j), s.vd);
        LieVec a1 = Eigen::Map<const LieVec>(s.a1_at(i, j), s.gd);
        LieVec a2 = Eigen::Map<const LieVec>(s.a2_at(i, j), s.gd);
        MultVec d1 = fd_dphi(s, 1, i, j, scheme) + act(a1, psi, rep);
        MultVec d2 = fd_dphi(s, 2, i, j, scheme) + act(a2, psi, rep);
        d.dirac_resid_max =
            std::max(d.dirac_resid_max,
                     dirac_residual(psi, dt, d1, d2, p, rep).cwiseAbs().maxCoeff());
      }
  }
  return d;
}

CovariantPoint covariant_point(const SliceHistory& h, double t, double x1, double x2,
                               const Representation& rep) {
  CovariantPoint cp;
  InterpPoint ip = h.interpolate(t, x1, x2);
  if (!ip.valid) return cp;
  cp.phi = ip.phi;
  cp.D0 = ip.pi;
  cp.D1 = ip.dphi1 + act(ip.a1, ip.phi, rep);
  cp.D2 = ip.dphi2 + act(ip.a2, ip.phi, rep);
  cp.a1 = ip.a1;
  cp.a2 = ip.a2;
  cp.valid = true;
  return cp;
}

double hyperboloid_y_limit(const SliceHistory& h, double tau, double margin) {
  if (h.size() < 4) throw std::out_of_range("history too short for interpolation");
  const auto& g = h.latest().grid;
  const double t_lo = h.t_front() + h.dt() + margin;
  const double t_hi = h.t_back() - 2 * h.dt() - margin;
  const double x_m = (0.5 * (g.n - 1) - 2) * g.h - margin;
  if (tau < t_lo || tau > t_hi || x_m <= 0)
    throw std::out_of_range("hyperboloid outside the interpolable window");
  double y = std::min(std::acosh(t_hi / tau), std::asinh(x_m / tau));
  return 0.999 * y;
}

namespace {

/// Chain-rule covariant legs in the hyperboloidal polar frame; all three are
/// regular on the axis (the theta leg is divided by tau sinh y).
struct FrameLegs {
  Eigen::VectorXcd Dtau, Dy_tau, Dth_reg;  ///< D_tau, D_y / tau, D_th / (tau sinh y)
};

FrameLegs frame_legs(const CovariantPoint& cp, const HyperboloidalPoint& p) {
  const double cy = std::cosh(p.y), sy = std::sinh(p.y);
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  Eigen::VectorXcd radial = c * cp.D1 + s * cp.D2;
  FrameLegs f;
  f.Dtau = cy * cp.D0 + sy * radial;
  f.Dy_tau = sy * cp.D0 + cy * radial;
  f.Dth_reg = -s * cp.D1 + c * cp.D2;
  return f;
}

}  // namespace

double hyperboloid_energy(const SliceHistory& h, double tau, const ModelParams& p,
                          const Representation& rep, const HyperboloidOptions& opt) {
  const double y_max = opt.y_max > 0 ? opt.y_max : hyperboloid_y_limit(h, tau);
  const double msq = mass_sq(p, rep.model);
  double acc = 0;
  for (const QuadNode& q : hyperboloid_quadrature(tau, y_max, opt.n_y, opt.n_theta)) {
    CovariantPoint cp = covariant_point(h, q.x[0], q.x[1], q.x[2], rep);
    if (!cp.valid) throw std::out_of_range("hyperboloid node outside the window");
    FrameLegs f = frame_legs(cp, q.p);
    const double cy = std::cosh(q.p.y), sy = std::sinh(q.p.y);
    double e = 0.5 * cy * (f.Dtau.squaredNorm() + f.Dy_tau.squaredNorm()) -
               sy * f.Dy_tau.dot(f.Dtau).real() +
               0.5 * cy * (f.Dth_reg.squaredNorm() + msq * cp.phi.squaredNorm());
    acc += q.w * e;
  }
  return acc;
}

double weighted_norm(const SliceHistory& h, double tau, int p_exp, int weight_power,
                     const Representation& rep, const HyperboloidOptions& opt) {
  const double y_max = opt.y_max > 0 ? opt.y_max : hyperboloid_y_limit(h, tau);
  double acc = 0, sup = 0;
  for (const QuadNode& q : hyperboloid_quadrature(tau, y_max, opt.n_y, opt.n_theta)) {
    CovariantPoint cp = covariant_point(h, q.x[0], q.x[1], q.x[2], rep);
    if (!cp.valid) throw std::out_of_range("hyperboloid node outside the window");
    const double cy = std::cosh(q.p.y);
    double v = std::pow(cy, weight_power) * cp.phi.norm();
    sup = std::max(sup, v);
    acc += q.w / cy * v * v;
  }
  return p_exp == 2 ? std::sqrt(acc) : sup;
}

namespace {

/// Lorentz field Z_{mu nu} applied covariantly to phi at an arbitrary point.
Eigen::VectorXcd z_phi(const SliceHistory& h, int mu, int nu, double t, double x1,
                       double x2, const Representation& rep, bool* ok) {
  CovariantPoint cp = covariant_point(h, t, x1, x2, rep);
  if (!cp.valid) {
    *ok = false;
    return {};
  }
  const double xl[3] = {-t, x1, x2};  // lowered coordinates
  const Eigen::VectorXcd* legs[3] = {&cp.D0, &cp.D1, &cp.D2};
  return xl[mu] * (*legs[nu]) - xl[nu] * (*legs[mu]);
}

/// Z_{mu nu} (Z_{rho sg} phi): the inner field is sampled on a small stencil
/// and differentiated, the connection terms use the interpolated a_j.
Eigen::VectorXcd zz_phi(const SliceHistory& h, int mu, int nu, int rho, int sg, double t,
                        double x1, double x2, double delta, const Representation& rep,
                        bool* ok) {
  auto g = [&](double dt, double d1, double d2) {
    return z_phi(h, rho, sg, t + dt, x1 + d1, x2 + d2, rep, ok);
  };
  Eigen::VectorXcd g0 = g(0, 0, 0);
  Eigen::VectorXcd d[3];
  d[0] = (g(delta, 0, 0) - g(-delta, 0, 0)) / (2 * delta);
  d[1] = (g(0, delta, 0) - g(0, -delta, 0)) / (2 * delta);
  d[2] = (g(0, 0, delta) - g(0, 0, -delta)) / (2 * delta);
  if (!*ok) return {};
  CovariantPoint cp = covariant_point(h, t, x1, x2, rep);
  Eigen::VectorXcd D[3] = {d[0], d[1] + act(cp.a1, g0, rep), d[2] + act(cp.a2, g0, rep)};
  const double xl[3] = {-t, x1, x2};
  return xl[mu] * D[nu] - xl[nu] * D[mu];
}

const int kZ[3][2] = {{0, 1}, {0, 2}, {1, 2}};

}  // namespace

double ks_ratio(const SliceHistory& h, double tau, const Representation& rep,
                const HyperboloidOptions& opt) {
  const auto& g = h.latest().grid;
  const double delta = 0.5 * std::min(g.h, h.dt());
  const double y_max =
      opt.y_max > 0 ? opt.y_max : hyperboloid_y_limit(h, tau, 2 * delta);
  double lhs = 0;
  double sum0 = 0, sum1 = 0, sum2 = 0;
  for (const QuadNode& q : hyperboloid_quadrature(tau, y_max, opt.n_y, opt.n_theta)) {
    bool ok = true;
    CovariantPoint cp = covariant_point(h, q.x[0], q.x[1], q.x[2], rep);
    if (!cp.valid) throw std::out_of_range("hyperboloid node outside the window");
    const double cy = std::cosh(q.p.y);
    lhs = std::max(lhs, cy * cp.phi.norm());
    const double w = q.w / cy * cy * cy;  // measure / cosh y, integrand weight cosh^2 y
    sum0 += w * cp.phi.squaredNorm();
    for (int a = 0; a < 3; ++a) {
      Eigen::VectorXcd z1 =
          z_phi(h, kZ[a][0], kZ[a][1], q.x[0], q.x[1], q.x[2], rep, &ok);
      sum1 += w * z1.squaredNorm();
      for (int b = 0; b < 3; ++b) {
        Eigen::VectorXcd z2 = zz_phi(h, kZ[a][0], kZ[a][1], kZ[b][0], kZ[b][1], q.x[0],
                                     q.x[1], q.x[2], delta, rep, &ok);
        if (!ok) throw std::out_of_range("derivative stencil outside the window");
        sum2 += w * z2.squaredNorm();
      }
    }
  }
  double rhs = std::sqrt(sum0) + std::sqrt(sum1) + std::sqrt(sum2);
  return rhs < 1e-14 ? 0.0 : tau * lhs / rhs;
}

double ode_quantity(const SliceHistory& h, double tau, double y, double theta,
                    const Representation& rep) {
  HyperboloidalPoint p{tau, y, theta};
  auto x = from_hyperboloidal(p);
  CovariantPoint cp = covariant_point(h, x[0], x[1], x[2], rep);
  if (!cp.valid) throw std::out_of_range("ray point outside the window");
  FrameLegs f = frame_legs(cp, p);
  const double cy = std::cosh(y);
  // D_tau(tau cosh y phi) = cosh y (phi + tau D_tau phi) at fixed (y, theta)
  return (cy * (cp.phi + tau * f.Dtau)).norm() + tau * cy * cp.phi.norm();
}

double diamagnetic_check(const SliceHistory& h,
                         const std::vector<std::array<double, 3>>& points,
                         const Representation& rep, double floor) {
  const auto& g = h.latest().grid;
  const double delta = 0.5 * std::min(g.h, h.dt());
  double worst = -1e300;
  for (const auto& pt : points) {
    CovariantPoint cp = covariant_point(h, pt[0], pt[1], pt[2], rep);
    if (!cp.valid || cp.phi.norm() <= floor) continue;
    const Eigen::VectorXcd* legs[3] = {&cp.D0, &cp.D1, &cp.D2};
    for (int mu = 0; mu < 3; ++mu) {
      double off[3] = {0, 0, 0};
      off[mu] = delta;
      CovariantPoint plus =
          covariant_point(h, pt[0] + off[0], pt[1] + off[1], pt[2] + off[2], rep);
      CovariantPoint minus =
          covariant_point(h, pt[0] - off[0], pt[1] - off[1], pt[2] - off[2], rep);
      if (!plus.valid || !minus.valid) continue;
      double dabs = (plus.phi.norm() - minus.phi.norm()) / (2 * delta);
      worst = std::max(worst, dabs - legs[mu]->norm());
    }
  }
  return worst;
}

bool IdentityReport::pass() const {
  for (const auto& e : entries)
    if (!(e.max_resid < tol)) return false;
  return !entries.empty();
}

}  // namespace cssim
