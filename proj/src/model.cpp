#include "cssim/model.hpp"

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

namespace cssim {

double mass_sq(const ModelParams& p, ModelKind m) {
  double k2 = p.kappa * p.kappa;
  if (is_csh(m)) return std::pow(p.v_or_m, 4) / k2;
  return p.v_or_m * p.v_or_m;
}

std::array<LieVec, 3> current_csh(const MultVec& phi, const std::array<MultVec, 3>& Dphi,
                                  const Representation& rep) {
  std::array<LieVec, 3> J;
  for (int mu = 0; mu < 3; ++mu) J[mu] = 2.0 * bbrk(phi, Dphi[mu], rep);
  return J;
}

std::array<LieVec, 3> current_csd(const MultVec& psi, const Representation& rep) {
  if (!rep.has_dirac) throw std::invalid_argument("current_csd needs a Dirac model");
  const std::complex<double> I(0, 1);
  // alpha_mu = eta_{mu nu} alpha^nu; alpha^0 = gamma^0 gamma^0 = id.
  std::array<Eigen::Matrix2cd, 3> al = {-Eigen::Matrix2cd::Identity(), rep.alpha[1],
                                        rep.alpha[2]};
  std::array<LieVec, 3> J;
  for (int mu = 0; mu < 3; ++mu) J[mu] = bbrk(psi, I * (al[mu] * psi), rep);
  return J;
}

MultVec potential_csh(const MultVec& phi, const ModelParams& p, const Representation& rep) {
  const int dim = rep.alg.dim;
  const double k2 = p.kappa * p.kappa, v2 = p.v_or_m * p.v_or_m;
  // q^A = <T^A phi, phi> (purely imaginary for anti-hermitian T^A)
  std::vector<std::complex<double>> q(dim);
  std::vector<MultVec> tphi(dim);
  for (int A = 0; A < dim; ++A) {
    tphi[A] = rep.t_ops[A] * phi;
    q[A] = phi.dot(tphi[A]);  // Eigen dot conjugates the argument: <T phi, phi>
  }
  MultVec u = MultVec::Zero(rep.v_dim);
  for (int A = 0; A < dim; ++A) u += (4 * v2 / k2) * q[A] * tphi[A];
  for (int A = 0; A < dim; ++A)
    for (int B = 0; B < dim; ++B) {
      MultVec tab = rep.t_ops[A] * tphi[B] + rep.t_ops[B] * tphi[A];
      u += (q[A] / k2) * phi.dot(tab) * tphi[B];
      u += (q[A] * q[B] / k2) * (rep.t_ops[A] * tphi[B]);
    }
  return u;
}

namespace {

/// Coefficients <-> matrices for the adjoint models (V = sl(n,C) in the
/// orthonormal anti-hermitian basis; coefficients may be complex).
Eigen::MatrixXcd to_matrix(const MultVec& v, const Representation& rep) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rep.alg.n, rep.alg.n);
  for (int A = 0; A < rep.alg.dim; ++A) m += v[A] * rep.alg.basis[A];
  return m;
}

MultVec to_coeffs(const Eigen::MatrixXcd& m, const Representation& rep) {
  MultVec v(rep.alg.dim);
  // orthonormal under <a,b> = tr(a b^dagger)
  for (int A = 0; A < rep.alg.dim; ++A)
    v[A] = (m * rep.alg.basis[A].adjoint()).trace();
  return v;
}

Eigen::MatrixXcd comm(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return a * b - b * a;
}

}  // namespace

MultVec potential_csh_closed(const MultVec& phi, const ModelParams& p,
                             const Representation& rep) {
  const double k2 = p.kappa * p.kappa, v2 = p.v_or_m * p.v_or_m;
  if (rep.model == ModelKind::csh_abelian) {
    double n2 = std::norm(phi[0]);
    MultVec u(1);
    u[0] = (-4 * v2 * n2 + 3 * n2 * n2) / k2 * phi[0];
    return u;
  }
  if (!is_csh(rep.model)) throw std::invalid_argument("closed form is for Higgs models");
  Eigen::MatrixXcd f = to_matrix(phi, rep);
  Eigen::MatrixXcd fd = f.adjoint();
  Eigen::MatrixXcd c = comm(f, fd);  // [phi, phi^dagger]
  Eigen::MatrixXcd u = (4 * v2 / k2) * comm(f, c) +
                       (2.0 / k2) * comm(comm(f, comm(fd, c)), f) +
                       (1.0 / k2) * comm(comm(f, c), c);
  return to_coeffs(u, rep);
}

MultVec potential_csd(const MultVec& psi, const ModelParams& p, const Representation& rep) {
  auto J = current_csd(psi, rep);
  // raise: J^0 = -J_0, J^j = J_j
  std::array<LieVec, 3> Ju = {-J[0], J[1], J[2]};
  // (1/(2 kappa)) eps_{mu nu lambda} gamma^mu gamma^nu (J^lambda psi)
  MultVec u = rep.gamma[0] * (rep.gamma[1] * act(Ju[2], psi, rep)) -
              rep.gamma[0] * (rep.gamma[2] * act(Ju[1], psi, rep)) +
              rep.gamma[1] * (rep.gamma[2] * act(Ju[0], psi, rep));
  return u / p.kappa;
}

MultVec squared_dirac_source(const MultVec& psi, const std::array<LieVec, 3>& F,
                             const Representation& rep) {
  return rep.gamma[0] * (rep.gamma[1] * act(F[0], psi, rep)) +
         rep.gamma[0] * (rep.gamma[2] * act(F[1], psi, rep)) +
         rep.gamma[1] * (rep.gamma[2] * act(F[2], psi, rep));
}

MultVec csd_time_derivative(const MultVec& psi, const MultVec& D1psi, const MultVec& D2psi,
                            const ModelParams& p, const Representation& rep) {
  const std::complex<double> I(0, 1);
  return -(rep.alpha[1] * D1psi) - (rep.alpha[2] * D2psi) +
         I * p.v_or_m * (rep.gamma[0] * psi);
}

MultVec dirac_residual(const MultVec& psi, const MultVec& dtpsi, const MultVec& D1psi,
                       const MultVec& D2psi, const ModelParams& p,
                       const Representation& rep) {
  const std::complex<double> I(0, 1);
  return I * (rep.gamma[0] * dtpsi) + I * (rep.gamma[1] * D1psi) +
         I * (rep.gamma[2] * D2psi) + p.v_or_m * psi;
}

MultVec potential(const MultVec& phi, const ModelParams& p, const Representation& rep) {
  return is_csh(rep.model) ? potential_csh(phi, p, rep) : potential_csd(phi, p, rep);
}

MultVec kg_nonlinearity(const MultVec& phi, const MultVec& d1phi, const MultVec& d2phi,
                        const LieVec& a1, const LieVec& a2, const LieVec& b,
                        const ModelParams& p, const Representation& rep) {
  if (!p.couplings) return MultVec::Zero(rep.v_dim);
  MultVec n = -2.0 * (act(a1, d1phi, rep) + act(a2, d2phi, rep));
  n += act(b, phi, rep);
  n -= act(a1, act(a1, phi, rep), rep) + act(a2, act(a2, phi, rep), rep);
  n += potential(phi, p, rep);
  return n;
}

MultVec kg_nonlinearity_forms(const MultVec& phi, const MultVec& pi, const MultVec& d1phi,
                              const MultVec& d2phi, const LieVec& a1, const LieVec& a2,
                              const LieVec& b, const ModelParams& p,
                              const Representation& rep) {
  if (!p.couplings) return MultVec::Zero(rep.v_dim);
  const int gd = rep.alg.dim, vd = rep.v_dim;
  FormValue A(1, Kind::lie, gd);
  for (int c = 0; c < gd; ++c) {
    A.comp[1][c] = a1[c];
    A.comp[2][c] = a2[c];
  }
  FormValue dphi(1, Kind::multiplet, vd);
  FormValue phi0(0, Kind::multiplet, vd);
  for (int c = 0; c < vd; ++c) {
    dphi.comp[0][c] = pi[c];
    dphi.comp[1][c] = d1phi[c];
    dphi.comp[2][c] = d2phi[c];
    phi0.comp[0][c] = phi[c];
  }
  FormValue aphi = wedge(A, phi0, rep);  // multiplet 1-form (A phi)
  FormValue n3 = scaled(hodge(wedge(A, hodge(dphi), rep)), std::complex<double>(2)) +
                 hodge(wedge(A, hodge(aphi), rep));
  MultVec out(vd);
  MultVec u = potential(phi, p, rep);
  MultVec bphi = act(b, phi, rep);
  for (int c = 0; c < vd; ++c) out[c] = n3.comp[0][c] + bphi[c] + u[c];
  return out;
}

LieVec dJ12(ModelKind kind, const MultVec& phi, const MultVec& pi, const MultVec& d1phi,
            const MultVec& d2phi, const LieVec& a1, const LieVec& a2,
            const ModelParams& p, const Representation& rep) {
  if (is_csh(kind)) {
    // five-term expansion of dJ in plain partials, with the constraint
    // F_12 = -(1/kappa) J_0 substituted (no second derivatives enter)
    LieVec J0 = 2.0 * bbrk(phi, pi, rep);
    LieVec out = 4.0 * bbrk(d1phi, d2phi, rep);
    out += 2.0 * (bbrk(d1phi, act(a2, phi, rep), rep) -
                  bbrk(d2phi, act(a1, phi, rep), rep));
    out -= (2.0 / p.kappa) * bbrk(phi, act(J0, phi, rep), rep);
    if (!rep.alg.abelian())
      out -= 2.0 * bbrk(phi, act(rep.alg.bracket(a1, a2), phi, rep), rep);
    out -= 2.0 * bbrk(phi, act(a1, d2phi, rep) - act(a2, d1phi, rep), rep);
    return out;
  }
  // Dirac: chain rule on the algebraic current; connection terms cancel,
  // so plain partials suffice.
  const std::complex<double> I(0, 1);
  MultVec ia1 = I * (rep.alpha[1] * phi);
  MultVec ia2 = I * (rep.alpha[2] * phi);
  LieVec out = bbrk(d1phi, ia2, rep) - bbrk(d2phi, ia1, rep);
  out -= bbrk(phi, I * (rep.alpha[1] * d2phi) - I * (rep.alpha[2] * d1phi), rep);
  return out;
}

namespace {

/// Centered FD weights applied to a per-node field of dimension dim; nodes
/// outside the grid contribute zero (fields vanish beyond the halo).
template <class T>
void fd_axis(const SimState& s, const std::vector<T>& field, int dim, int axis, int i,
             int j, Scheme scheme, T* out) {
  const int n = s.grid.n;
  auto at = [&](int di) -> const T* {
    int ii = i + (axis == 1 ? di : 0), jj = j + (axis == 2 ? di : 0);
    if (ii < 0 || ii >= n || jj < 0 || jj >= n) return nullptr;
    return &field[(size_t(ii) * n + jj) * dim];
  };
  auto add = [&](int di, double w) {
    if (const T* ptr = at(di))
      for (int c = 0; c < dim; ++c) out[c] += w * ptr[c];
  };
  for (int c = 0; c < dim; ++c) out[c] = T(0);
  if (scheme == Scheme::central2) {
    add(1, 0.5 / s.grid.h);
    add(-1, -0.5 / s.grid.h);
  } else if (scheme == Scheme::central4) {
    double w1 = 8.0 / (12 * s.grid.h), w2 = 1.0 / (12 * s.grid.h);
    add(1, w1);
    add(-1, -w1);
    add(2, -w2);
    add(-2, w2);
  } else {
    throw std::invalid_argument("grid FD needs a finite-difference scheme");
  }
}

}  // namespace

MultVec fd_dphi(const SimState& s, int axis, int i, int j, Scheme scheme) {
  MultVec out(s.vd);
  fd_axis(s, s.phi, s.vd, axis, i, j, scheme, out.data());
  return out;
}

MultVec fd_dpi(const SimState& s, int axis, int i, int j, Scheme scheme) {
  MultVec out(s.vd);
  fd_axis(s, s.pi, s.vd, axis, i, j, scheme, out.data());
  return out;
}

LieVec fd_da(const SimState& s, const std::vector<double>& field, int axis, int i, int j,
             Scheme scheme) {
  LieVec out(s.gd);
  fd_axis(s, field, s.gd, axis, i, j, scheme, out.data());
  return out;
}

LieVec curvature_f12(const SimState& s, int i, int j, Scheme scheme,
                     const Representation& rep) {
  LieVec f = fd_da(s, s.a2, 1, i, j, scheme) - fd_da(s, s.a1, 2, i, j, scheme);
  if (!rep.alg.abelian()) {
    Eigen::Map<const LieVec> a1(s.a1_at(i, j), s.gd), a2(s.a2_at(i, j), s.gd);
    f += rep.alg.bracket(a1, a2);
  }
  return f;
}

LieVec constraint_residual_at(const SimState& s, int i, int j, Scheme scheme,
                              const ModelParams& p, const Representation& rep) {
  LieVec f = curvature_f12(s, i, j, scheme, rep);
  Eigen::Map<const MultVec> phi(s.phi_at(i, j), s.vd);
  LieVec j0;
  if (is_csh(rep.model)) {
    Eigen::Map<const MultVec> pi(s.pi_at(i, j), s.vd);
    j0 = 2.0 * bbrk(phi, MultVec(pi), rep);
  } else {
    const std::complex<double> I(0, 1);
    j0 = bbrk(phi, MultVec(-I * phi), rep);
  }
  // (F - (1/kappa) *J)_12 with (*J)_12 = -J_0
  return f + (1.0 / p.kappa) * j0;
}

ConstraintReport constraint_residual(const SimState& s, Scheme scheme,
                                     const ModelParams& p, const Representation& rep) {
  ConstraintReport rep_out;
  double scale = 0, sum2 = 0;
  const int n = s.grid.n;
  // only nodes whose curvature stencil stays on the grid: at the outer ring
  // the centered differences would read truncated (zero) neighbors
  const int m = (scheme == Scheme::central4) ? 2 : 1;
  for (int i = m; i < n - m; ++i)
    for (int j = m; j < n - m; ++j) {
      LieVec r = constraint_residual_at(s, i, j, scheme, p, rep);
      LieVec f = curvature_f12(s, i, j, scheme, rep);
      rep_out.max_abs = std::max(rep_out.max_abs, r.template lpNorm<Eigen::Infinity>());
      scale = std::max(scale, f.template lpNorm<Eigen::Infinity>());
      scale = std::max(scale, (r - f).template lpNorm<Eigen::Infinity>());
      sum2 += r.squaredNorm();
    }
  rep_out.l2 = std::sqrt(sum2) * s.grid.h;
  rep_out.rel = rep_out.max_abs / std::max(scale, 1e-300);
  return rep_out;
}

LieVec b_consistency_at(const SimState& s, int i, int j, Scheme scheme) {
  Eigen::Map<const LieVec> b(s.b_at(i, j), s.gd);
  return LieVec(b) + fd_da(s, s.a1, 1, i, j, scheme) + fd_da(s, s.a2, 2, i, j, scheme);
}

SimState gauge_transform(const SimState& s, const std::vector<double>& chi,
                         const std::vector<double>& dchi1, const std::vector<double>& dchi2,
                         const std::vector<double>& lapchi, int dir,
                         const Representation& rep) {
  SimState out = s;
  const int n = s.grid.n;
  const std::complex<double> I(0, 1);
  const bool ab = rep.alg.abelian();
  Eigen::MatrixXcd M;
  if (!ab) M = rep.alg.basis[dir];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      size_t node = size_t(i) * n + j;
      double c = chi[node], d1 = dchi1[node], d2 = dchi2[node], lap = lapchi[node];
      if (ab) {
        std::complex<double> u = std::exp(I * c);
        for (int k = 0; k < s.vd; ++k) {
          out.phi_at(i, j)[k] = u * s.phi_at(i, j)[k];
          out.pi_at(i, j)[k] = u * s.pi_at(i, j)[k];
        }
        out.a1_at(i, j)[0] = s.a1_at(i, j)[0] - d1;
        out.a2_at(i, j)[0] = s.a2_at(i, j)[0] - d2;
        out.b_at(i, j)[0] = s.b_at(i, j)[0] + lap;
      } else {
        Eigen::MatrixXcd U = (c * M).exp();
        Eigen::MatrixXcd Ui = U.adjoint();  // unitary
        Eigen::Map<const MultVec> phi(s.phi_at(i, j), s.vd);
        Eigen::Map<const MultVec> pi(s.pi_at(i, j), s.vd);
        MultVec phim = to_coeffs(U * to_matrix(phi, rep) * Ui, rep);
        MultVec pim = to_coeffs(U * to_matrix(pi, rep) * Ui, rep);
        Eigen::Map<const LieVec> a1(s.a1_at(i, j), s.gd), a2(s.a2_at(i, j), s.gd),
            b(s.b_at(i, j), s.gd);
        Eigen::MatrixXcd ua1 = U * to_matrix(a1.cast<std::complex<double>>(), rep) * Ui;
        Eigen::MatrixXcd ua2 = U * to_matrix(a2.cast<std::complex<double>>(), rep) * Ui;
        Eigen::MatrixXcd ub = U * to_matrix(b.cast<std::complex<double>>(), rep) * Ui;
        Eigen::MatrixXcd a1m = ua1 - d1 * M;
        Eigen::MatrixXcd a2m = ua2 - d2 * M;
        // b' = delta A' = U b U^-1 - sum_j d_j chi [M, U a_j U^-1] + (lap chi) M
        Eigen::MatrixXcd bm = ub - d1 * comm(M, ua1) - d2 * comm(M, ua2) + lap * M;
        MultVec a1c = to_coeffs(a1m, rep), a2c = to_coeffs(a2m, rep), bc = to_coeffs(bm, rep);
        for (int k = 0; k < s.vd; ++k) {
          out.phi_at(i, j)[k] = phim[k];
          out.pi_at(i, j)[k] = pim[k];
        }
        for (int k = 0; k < s.gd; ++k) {
          out.a1_at(i, j)[k] = a1c[k].real();
          out.a2_at(i, j)[k] = a2c[k].real();
          out.b_at(i, j)[k] = bc[k].real();
        }
      }
    }
  return out;
}

}  // namespace cssim
