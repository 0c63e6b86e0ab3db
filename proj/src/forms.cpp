#include "cssim/forms.hpp"

#include <algorithm>
#include <cmath>

namespace cssim {

namespace {

const std::vector<std::vector<int>>& basis(int degree) {
  static const std::vector<std::vector<int>> b0 = {{}};
  static const std::vector<std::vector<int>> b1 = {{0}, {1}, {2}};
  static const std::vector<std::vector<int>> b2 = {{0, 1}, {0, 2}, {1, 2}};
  static const std::vector<std::vector<int>> b3 = {{0, 1, 2}};
  switch (degree) {
    case 0: return b0;
    case 1: return b1;
    case 2: return b2;
    case 3: return b3;
  }
  throw std::invalid_argument("bad form degree");
}

}  // namespace

const std::vector<int>& form_index(int degree, int c) { return basis(degree)[c]; }

int form_lookup(int degree, const std::vector<int>& idx) {
  const auto& b = basis(degree);
  for (int c = 0; c < int(b.size()); ++c)
    if (b[c] == idx) return c;
  return -1;
}

int merge_sign(int ka, int ca, int kb, int cb, int* out) {
  const auto& A = basis(ka)[ca];
  const auto& B = basis(kb)[cb];
  std::vector<int> merged = A;
  merged.insert(merged.end(), B.begin(), B.end());
  int sign = 1;
  // bubble sort counting inversions; duplicates kill the product
  for (size_t i = 0; i < merged.size(); ++i)
    for (size_t j = i + 1; j < merged.size(); ++j) {
      if (merged[i] == merged[j]) return 0;
      if (merged[i] > merged[j]) {
        std::swap(merged[i], merged[j]);
        sign = -sign;
      }
    }
  *out = form_lookup(ka + kb, merged);
  return sign;
}

int star_sign(int degree, int c, int* out) {
  const auto& J = basis(degree)[c];
  std::vector<int> comp;
  for (int mu = 0; mu < 3; ++mu)
    if (std::find(J.begin(), J.end(), mu) == J.end()) comp.push_back(mu);
  *out = form_lookup(3 - degree, comp);
  // sign of the permutation (J, J^c) relative to (0,1,2)
  std::vector<int> perm = J;
  perm.insert(perm.end(), comp.begin(), comp.end());
  int sigma = 1;
  for (size_t i = 0; i < perm.size(); ++i)
    for (size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) sigma = -sigma;
  int g = 1;  // product of eta^{mu mu} over J; eta^{00} = -1
  for (int mu : J)
    if (mu == 0) g = -g;
  return g * sigma;
}

int coeff_dim(Kind kind, const Representation& rep) {
  switch (kind) {
    case Kind::real: return 1;
    case Kind::lie: return rep.alg.dim;
    case Kind::multiplet: return rep.v_dim;
  }
  return 1;
}

Kind wedge_kind(Kind a, Kind b) {
  if (a == Kind::real) return b;
  if (b == Kind::real) return a;
  if (a == Kind::lie && b == Kind::lie) return Kind::lie;
  if (a == Kind::lie && b == Kind::multiplet) return Kind::multiplet;
  throw std::invalid_argument("unsupported wedge coefficient pairing");
}

double form_norm(const FormValue& w) {
  double s = 0;
  for (const auto& c : w.comp)
    for (const auto& z : c) s += std::norm(z);
  return std::sqrt(s);
}

double jet_form_max(const JetForm& w) {
  double r = 0;
  for (const auto& c : w.comp)
    for (const auto& j : c) r = std::max(r, j.max_abs());
  return r;
}

FormValue jet_form_value(const JetForm& w) {
  FormValue r(w.degree, w.kind, w.cdim());
  for (size_t c = 0; c < w.comp.size(); ++c)
    for (size_t i = 0; i < w.comp[c].size(); ++i) r.comp[c][i] = w.comp[c][i].value();
  return r;
}

JetForm ext_d(const JetForm& w) {
  JetForm r(w.degree + 1, w.kind, w.cdim());
  for (int mu = 0; mu < 3; ++mu)
    for (int c = 0; c < ncomp(w.degree); ++c) {
      int target;
      int sg = merge_sign(1, mu, w.degree, c, &target);
      if (sg == 0) continue;
      for (size_t i = 0; i < w.comp[c].size(); ++i)
        r.comp[target][i] += double(sg) * w.comp[c][i].deriv(mu);
    }
  return r;
}

JetForm cov_d(const JetForm& A, const JetForm& v, const Representation& rep) {
  JetForm r = ext_d(v);
  r += wedge(A, v, rep);
  return r;
}

JetForm lie_d(const JetVec& X, const JetForm& w) {
  JetForm r = interior(X, ext_d(w));
  if (w.degree > 0) r += ext_d(interior(X, w));
  return r;
}

JetForm cov_lie(const JetVec& X, const JetForm& A, const JetForm& v,
                const Representation& rep) {
  JetForm r = lie_d(X, v);
  JetForm iXA = interior(X, A);
  r += wedge(iXA, v, rep);
  return r;
}

JetForm codifferential(const JetForm& A, const JetForm& v, const Representation& rep) {
  double sg = (v.degree % 2 == 0) ? -1.0 : 1.0;  // (-1)^{k+1}
  return scaled(hodge(cov_d(A, hodge(v), rep)), sg);
}

JetForm cov_box(const JetForm& A, const JetForm& v, const Representation& rep) {
  return scaled(hodge(cov_d(A, hodge(cov_d(A, v, rep)), rep)), -1.0);
}

JetForm curvature(const JetForm& A, const Representation& rep) {
  JetForm r = ext_d(A);
  if (!rep.alg.abelian()) r += scaled(wedge(A, A, rep), 0.5);
  return r;
}

JetVec vec_commutator(const JetVec& X, const JetVec& Y) {
  JetVec r;
  for (int mu = 0; mu < 3; ++mu)
    for (int nu = 0; nu < 3; ++nu)
      r.x[mu] += X.x[nu] * Y.x[mu].deriv(nu) - Y.x[nu] * X.x[mu].deriv(nu);
  return r;
}

}  // namespace cssim
