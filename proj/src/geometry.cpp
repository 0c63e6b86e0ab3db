#include "cssim/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace cssim {

HyperboloidalPoint to_hyperboloidal(double t, double x1, double x2) {
  double r = std::hypot(x1, x2);
  if (!(t > r)) throw std::domain_error("point outside the forward cone");
  HyperboloidalPoint p;
  p.tau = std::sqrt((t - r) * (t + r));
  p.y = 0.5 * std::log((t + r) / (t - r));
  p.theta = std::atan2(x2, x1);
  if (p.theta < 0) p.theta += 2 * M_PI;
  return p;
}

std::array<double, 3> from_hyperboloidal(const HyperboloidalPoint& p) {
  double t = p.tau * std::cosh(p.y);
  double r = p.tau * std::sinh(p.y);
  return {t, r * std::cos(p.theta), r * std::sin(p.theta)};
}

VectorValue translation_vector(int mu) {
  VectorValue v;
  v.x[mu] = 1;
  return v;
}

VectorValue killing_vector(int mu, int nu, const std::array<double, 3>& x) {
  auto lower = [&](int m) { return m == 0 ? -x[0] : x[m]; };
  VectorValue v;
  v.x[nu] += lower(mu);
  v.x[mu] -= lower(nu);
  return v;
}

VectorValue scaling_vector(const std::array<double, 3>& x) {
  VectorValue v;
  for (int mu = 0; mu < 3; ++mu) v.x[mu] = x[mu];
  return v;
}

VectorValue normal_vector(const std::array<double, 3>& x) {
  double r = std::hypot(x[1], x[2]);
  if (!(x[0] > r)) throw std::domain_error("normal outside the forward cone");
  double tau = std::sqrt((x[0] - r) * (x[0] + r));
  VectorValue v = scaling_vector(x);
  for (int mu = 0; mu < 3; ++mu) v.x[mu] /= tau;
  return v;
}

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0, p1, dp;
    for (int it = 0; it < 100; ++it) {
      p0 = 1;
      p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = t;
    w[i] = 2.0 / ((1 - t * t) * dp * dp);
  }
}

}  // namespace

std::vector<QuadNode> hyperboloid_quadrature(double tau, double y_max, int n_y,
                                             int n_theta) {
  std::vector<double> gy, gw;
  gauss_legendre(n_y, gy, gw);
  double dth = 2 * M_PI / n_theta;
  std::vector<QuadNode> nodes;
  nodes.reserve(size_t(n_y) * n_theta);
  for (int i = 0; i < n_y; ++i) {
    double y = 0.5 * y_max * (gy[i] + 1);
    double wy = 0.5 * y_max * gw[i];
    for (int j = 0; j < n_theta; ++j) {
      QuadNode q;
      q.p = {tau, y, j * dth};
      q.x = from_hyperboloidal(q.p);
      q.w = tau * tau * std::cosh(y) * wy * dth;
      nodes.push_back(q);
    }
  }
  return nodes;
}

void SliceHistory::push(SimState s) {
  if (!slices_.empty()) {
    double expect = slices_.back().t + dt_;
    if (std::abs(s.t - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
      throw std::invalid_argument("slice history requires uniform time spacing");
  }
  slices_.push_back(std::move(s));
  while (int(slices_.size()) > capacity_) slices_.pop_front();
}

bool SliceHistory::covers(double t, double x1, double x2) const {
  if (int(slices_.size()) < 4) return false;
  double s = (t - slices_.front().t) / dt_;
  int k0 = int(std::floor(s)) - 1;
  if (k0 < 0 || k0 + 3 >= int(slices_.size())) return false;
  const auto& g = slices_.front().grid;
  for (double x : {x1, x2}) {
    double u = x / g.h + 0.5 * (g.n - 1);
    int i0 = int(std::floor(u)) - 1;
    if (i0 < 0 || i0 + 3 >= g.n) return false;
  }
  return true;
}

namespace {

// cubic Lagrange weights for nodes at offsets {-1,0,1,2}, s in [0,1]
void lagrange4(double s, double* w, double* dw) {
  w[0] = -s * (s - 1) * (s - 2) / 6;
  w[1] = (s + 1) * (s - 1) * (s - 2) / 2;
  w[2] = -(s + 1) * s * (s - 2) / 2;
  w[3] = (s + 1) * s * (s - 1) / 6;
  if (dw) {
    dw[0] = -(3 * s * s - 6 * s + 2) / 6;
    dw[1] = (3 * s * s - 4 * s - 1) / 2;
    dw[2] = -(3 * s * s - 2 * s - 2) / 2;
    dw[3] = (3 * s * s - 1) / 6;
  }
}

}  // namespace

InterpPoint SliceHistory::interpolate(double t, double x1, double x2) const {
  InterpPoint out;
  if (!covers(t, x1, x2)) return out;
  const auto& g = slices_.front().grid;
  int vd = slices_.front().vd, gd = slices_.front().gd;

  double st = (t - slices_.front().t) / dt_;
  int k0 = int(std::floor(st)) - 1;
  double wt[4];
  lagrange4(st - (k0 + 1), wt, nullptr);

  double u1 = x1 / g.h + 0.5 * (g.n - 1);
  double u2 = x2 / g.h + 0.5 * (g.n - 1);
  int i0 = int(std::floor(u1)) - 1;
  int j0 = int(std::floor(u2)) - 1;
  double w1[4], d1[4], w2[4], d2[4];
  lagrange4(u1 - (i0 + 1), w1, d1);
  lagrange4(u2 - (j0 + 1), w2, d2);
  for (int p = 0; p < 4; ++p) {
    d1[p] /= g.h;
    d2[p] /= g.h;
  }

  out.phi = Eigen::VectorXcd::Zero(vd);
  out.pi = Eigen::VectorXcd::Zero(vd);
  out.dphi1 = Eigen::VectorXcd::Zero(vd);
  out.dphi2 = Eigen::VectorXcd::Zero(vd);
  out.a1 = Eigen::VectorXd::Zero(gd);
  out.a2 = Eigen::VectorXd::Zero(gd);
  out.b = Eigen::VectorXd::Zero(gd);

  for (int k = 0; k < 4; ++k) {
    const SimState& s = slices_[k0 + k];
    double tw = wt[k];
    if (tw == 0) continue;
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q < 4; ++q) {
        int i = i0 + p, j = j0 + q;
        double wv = w1[p] * w2[q];
        double wd1 = d1[p] * w2[q];
        double wd2 = w1[p] * d2[q];
        const auto* ph = s.phi_at(i, j);
        const auto* pp = s.pi_at(i, j);
        for (int c = 0; c < vd; ++c) {
          out.phi[c] += tw * wv * ph[c];
          out.pi[c] += tw * wv * pp[c];
          out.dphi1[c] += tw * wd1 * ph[c];
          out.dphi2[c] += tw * wd2 * ph[c];
        }
        const double* pa1 = s.a1_at(i, j);
        const double* pa2 = s.a2_at(i, j);
        const double* pb = s.b_at(i, j);
        for (int c = 0; c < gd; ++c) {
          out.a1[c] += tw * wv * pa1[c];
          out.a2[c] += tw * wv * pa2[c];
          out.b[c] += tw * wv * pb[c];
        }
      }
  }
  out.valid = true;
  return out;
}

}  // namespace cssim
