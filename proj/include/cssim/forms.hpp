#ifndef CSSIM_FORMS_HPP
#define CSSIM_FORMS_HPP

#include <complex>
#include <stdexcept>
#include <vector>

#include "cssim/jet.hpp"
#include "cssim/representation.hpp"

namespace cssim {

/// Coefficient kind of a form: real scalars, Lie-algebra valued, or valued in
/// the matter multiplet V.
enum class Kind { real, lie, multiplet };

/// Derivative backend: exact (jet fields), or centered finite differences.
enum class Scheme { exact, central2, central4 };

/// Number of components of a k-form on R^{1+2}: C(3,k).
inline int ncomp(int k) { return (k == 0 || k == 3) ? 1 : 3; }

/// Canonical strictly-increasing multi-index of component c of a k-form.
/// Degree 1: {0},{1},{2}.  Degree 2: {0,1},{0,2},{1,2}.
const std::vector<int>& form_index(int degree, int c);

/// Component slot of a sorted multi-index, or -1.
int form_lookup(int degree, const std::vector<int>& idx);

/// Sign of merging two disjoint sorted multi-indices into sorted order
/// (0 if they intersect); *out gives the target component slot.
int merge_sign(int ka, int ca, int kb, int cb, int* out);

/// Hodge dual of basis component c of degree k: slot *out in degree 3-k,
/// returned sign, per w1 ^ *w2 = eta^{-1}(w1,w2) eps with eps = dx0^dx1^dx2.
int star_sign(int degree, int c, int* out);

/// Pointwise k-form with coefficients of the given kind; scalar ring S is
/// complex<double> for numeric values or Jet for exact derivative work.
template <class S>
struct FormT {
  int degree = 0;
  Kind kind = Kind::real;
  std::vector<std::vector<S>> comp;  ///< [ncomp(degree)][coefficient dim]

  FormT() = default;
  FormT(int deg, Kind kd, int cdim)
      : degree(deg), kind(kd), comp(ncomp(deg), std::vector<S>(cdim, S(0.0))) {}
  int cdim() const { return comp.empty() ? 0 : int(comp[0].size()); }
};

using FormValue = FormT<std::complex<double>>;
using JetForm = FormT<Jet>;

/// Contravariant vector X^mu.
template <class S>
struct VecT {
  S x[3] = {S(0.0), S(0.0), S(0.0)};
};
using VectorValue = VecT<std::complex<double>>;
using JetVec = VecT<Jet>;

int coeff_dim(Kind kind, const Representation& rep);

namespace detail {
inline std::complex<double> cs_conj(const std::complex<double>& z) { return std::conj(z); }
inline Jet cs_conj(const Jet& j) { return j.conj(); }
}  // namespace detail

template <class S>
FormT<S>& operator+=(FormT<S>& a, const FormT<S>& b) {
  for (size_t c = 0; c < a.comp.size(); ++c)
    for (size_t i = 0; i < a.comp[c].size(); ++i) a.comp[c][i] += b.comp[c][i];
  return a;
}

template <class S>
FormT<S> operator+(FormT<S> a, const FormT<S>& b) { return a += b; }

template <class S>
FormT<S>& operator-=(FormT<S>& a, const FormT<S>& b) {
  for (size_t c = 0; c < a.comp.size(); ++c)
    for (size_t i = 0; i < a.comp[c].size(); ++i) a.comp[c][i] -= b.comp[c][i];
  return a;
}

template <class S>
FormT<S> operator-(FormT<S> a, const FormT<S>& b) { return a -= b; }

template <class S, class R>
FormT<S> scaled(const FormT<S>& a, const R& s) {
  FormT<S> r = a;
  for (auto& c : r.comp)
    for (auto& v : c) v = s * v;
  return r;
}

/// Coefficient pairing used by the wedge product.  Supported:
/// real*real, real*lie, real*multiplet (either order), lie*lie (bracket),
/// lie*multiplet (representation action, Lie factor on the left).
template <class S>
void pair_mul(Kind ka, const std::vector<S>& a, Kind kb, const std::vector<S>& b,
              Kind kout, std::vector<S>& out, const S& sign,
              const Representation& rep) {
  if (ka == Kind::real) {
    for (size_t i = 0; i < b.size(); ++i) out[i] += sign * (a[0] * b[i]);
  } else if (kb == Kind::real) {
    for (size_t i = 0; i < a.size(); ++i) out[i] += sign * (a[i] * b[0]);
  } else if (ka == Kind::lie && kb == Kind::lie) {
    for (const auto& e : rep.alg.c_nnz) out[e.C] += e.c * (sign * (a[e.A] * b[e.B]));
  } else if (ka == Kind::lie && kb == Kind::multiplet) {
    for (int A = 0; A < rep.alg.dim; ++A) {
      S sa = sign * a[A];
      for (int i = 0; i < rep.v_dim; ++i)
        for (int j = 0; j < rep.v_dim; ++j) {
          auto t = rep.t_ops[A](i, j);
          if (t != std::complex<double>(0)) out[i] += t * (sa * b[j]);
        }
    }
  } else {
    (void)kout;
    throw std::invalid_argument("unsupported wedge coefficient pairing");
  }
}

Kind wedge_kind(Kind a, Kind b);

/// Wedge product a ^ b with the stated coefficient pairing; for (lie,lie)
/// this is [a ^ b].  Binary; nested products associate right-to-left by the
/// caller's parenthesization.
template <class S>
FormT<S> wedge(const FormT<S>& a, const FormT<S>& b, const Representation& rep) {
  if (a.degree + b.degree > 3) throw std::invalid_argument("wedge degree overflow");
  Kind kout = wedge_kind(a.kind, b.kind);
  FormT<S> r(a.degree + b.degree, kout, coeff_dim(kout, rep));
  for (int ca = 0; ca < ncomp(a.degree); ++ca)
    for (int cb = 0; cb < ncomp(b.degree); ++cb) {
      int target;
      int sg = merge_sign(a.degree, ca, b.degree, cb, &target);
      if (sg == 0) continue;
      pair_mul(a.kind, a.comp[ca], b.kind, b.comp[cb], kout, r.comp[target],
               S(double(sg)), rep);
    }
  return r;
}

/// g-valued wedge <<v ^ w>> induced by the bilinear form
/// <<v,w>> = (1/2)(<Tv,w> + <w,Tv>); satisfies <<v^w>> = (-1)^{kl+1} <<w^v>>.
template <class S>
FormT<S> bbrk_wedge(const FormT<S>& v, const FormT<S>& w, const Representation& rep) {
  if (v.degree + w.degree > 3) throw std::invalid_argument("wedge degree overflow");
  FormT<S> r(v.degree + w.degree, Kind::lie, rep.alg.dim);
  for (int ca = 0; ca < ncomp(v.degree); ++ca)
    for (int cb = 0; cb < ncomp(w.degree); ++cb) {
      int target;
      int sg = merge_sign(v.degree, ca, w.degree, cb, &target);
      if (sg == 0) continue;
      for (int A = 0; A < rep.alg.dim; ++A) {
        S u(0.0);
        for (int i = 0; i < rep.v_dim; ++i) {
          S tv(0.0);
          for (int j = 0; j < rep.v_dim; ++j) {
            auto t = rep.t_ops[A](i, j);
            if (t != std::complex<double>(0)) tv += t * v.comp[ca][j];
          }
          u += tv * detail::cs_conj(w.comp[cb][i]);
        }
        r.comp[target][A] += (0.5 * sg) * (u + detail::cs_conj(u));
      }
    }
  return r;
}

/// Hodge star for eta = diag(-1,1,1) and eps = dx0 ^ dx1 ^ dx2; ** = -1.
template <class S>
FormT<S> hodge(const FormT<S>& w) {
  FormT<S> r(3 - w.degree, w.kind, w.cdim());
  for (int c = 0; c < ncomp(w.degree); ++c) {
    int target;
    int sg = star_sign(w.degree, c, &target);
    for (size_t i = 0; i < w.comp[c].size(); ++i)
      r.comp[target][i] = double(sg) * w.comp[c][i];
  }
  return r;
}

/// Interior product; contraction in the left-most slot.
template <class S>
FormT<S> interior(const VecT<S>& X, const FormT<S>& w) {
  if (w.degree == 0) throw std::invalid_argument("interior of a 0-form");
  FormT<S> r(w.degree - 1, w.kind, w.cdim());
  for (int c = 0; c < ncomp(w.degree); ++c) {
    const auto& I = form_index(w.degree, c);
    for (size_t p = 0; p < I.size(); ++p) {
      std::vector<int> rest;
      for (size_t q = 0; q < I.size(); ++q)
        if (q != p) rest.push_back(I[q]);
      int target = form_lookup(w.degree - 1, rest);
      double sg = (p % 2 == 0) ? 1.0 : -1.0;
      for (size_t i = 0; i < w.comp[c].size(); ++i)
        r.comp[target][i] += sg * (X.x[I[p]] * w.comp[c][i]);
    }
  }
  return r;
}

/// Metric dual 1-form X^flat with components eta_{mu nu} X^nu.
template <class S>
FormT<S> musical_flat(const VecT<S>& X) {
  FormT<S> r(1, Kind::real, 1);
  r.comp[0][0] = -1.0 * X.x[0];
  r.comp[1][0] = X.x[1];
  r.comp[2][0] = X.x[2];
  return r;
}

/// Euclidean pointwise norm: |w|^2 = sum over increasing multi-indices of the
/// coefficient norm squared.
double form_norm(const FormValue& w);

/// Max coefficient magnitude of a jet form (all Taylor orders); a residual
/// gauge for exact identity checks.
double jet_form_max(const JetForm& w);
/// Value-only (order zero) version.
FormValue jet_form_value(const JetForm& w);

// ---- exact-derivative operators on jet fields ----

/// Exterior derivative d.
JetForm ext_d(const JetForm& w);
/// Covariant derivative d_A v = dv + A ^ v (bracket action on lie v).
JetForm cov_d(const JetForm& A, const JetForm& v, const Representation& rep);
/// Lie derivative along X via Cartan's formula.
JetForm lie_d(const JetVec& X, const JetForm& w);
/// Covariant Lie derivative L^A_X v = L_X v + (i_X A) v.
JetForm cov_lie(const JetVec& X, const JetForm& A, const JetForm& v,
                const Representation& rep);
/// Codifferential delta_A = (-1)^{k+1} * d_A * (A empty for the plain delta).
JetForm codifferential(const JetForm& A, const JetForm& v, const Representation& rep);
/// Covariant d'Alembertian box_A = -* d_A * d_A on 0-forms.
JetForm cov_box(const JetForm& A, const JetForm& v, const Representation& rep);
/// Curvature F = dA + (1/2)[A ^ A].
JetForm curvature(const JetForm& A, const Representation& rep);
/// Vector-field commutator [X,Y]^mu = X^nu d_nu Y^mu - Y^nu d_nu X^mu.
JetVec vec_commutator(const JetVec& X, const JetVec& Y);

}  // namespace cssim

#endif
