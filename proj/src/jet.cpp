#include "cssim/jet.hpp"

#include <stdexcept>

namespace cssim {

namespace {

struct Tables {
  std::vector<std::array<int, 3>> mindex;   // flat -> (i,j,k)
  std::vector<int> lookup;                  // (i,j,k) packed -> flat
  std::vector<int> prod;                    // flat pair -> flat product, -1 if overflow
  int n = 0;

  static int pack(int i, int j, int k) { return (i * (Jet::ORDER + 1) + j) * (Jet::ORDER + 1) + k; }

  Tables() {
    const int N = Jet::ORDER;
    lookup.assign((N + 1) * (N + 1) * (N + 1), -1);
    for (int d = 0; d <= N; ++d)
      for (int i = d; i >= 0; --i)
        for (int j = d - i; j >= 0; --j) {
          int k = d - i - j;
          lookup[pack(i, j, k)] = int(mindex.size());
          mindex.push_back({i, j, k});
        }
    n = int(mindex.size());
    prod.assign(n * n, -1);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        int i = mindex[a][0] + mindex[b][0];
        int j = mindex[a][1] + mindex[b][1];
        int k = mindex[a][2] + mindex[b][2];
        if (i + j + k <= N) prod[a * n + b] = lookup[pack(i, j, k)];
      }
  }
};

const Tables& tab() {
  static const Tables t;
  return t;
}

}  // namespace

int Jet::size() { return tab().n; }
int Jet::idx(int i, int j, int k) { return tab().lookup[Tables::pack(i, j, k)]; }
const std::array<int, 3>& Jet::mindex(int m) { return tab().mindex[m]; }

Jet Jet::var(int mu, double v) {
  Jet j(v);
  int m[3] = {0, 0, 0};
  m[mu] = 1;
  j.c_[idx(m[0], m[1], m[2])] = 1;
  return j;
}

Jet Jet::operator+(const Jet& o) const {
  Jet r = *this;
  r += o;
  return r;
}

Jet Jet::operator-(const Jet& o) const {
  Jet r = *this;
  r -= o;
  return r;
}

Jet Jet::operator-() const {
  Jet r;
  for (int m = 0; m < size(); ++m) r.c_[m] = -c_[m];
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  for (int m = 0; m < size(); ++m) c_[m] += o.c_[m];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  for (int m = 0; m < size(); ++m) c_[m] -= o.c_[m];
  return *this;
}

Jet Jet::operator*(const Jet& o) const {
  const auto& t = tab();
  Jet r;
  for (int a = 0; a < t.n; ++a) {
    if (c_[a] == C(0)) continue;
    const int* row = &t.prod[a * t.n];
    for (int b = 0; b < t.n; ++b) {
      int p = row[b];
      if (p >= 0 && o.c_[b] != C(0)) r.c_[p] += c_[a] * o.c_[b];
    }
  }
  return r;
}

Jet operator*(Jet::C s, const Jet& j) {
  Jet r;
  for (int m = 0; m < Jet::size(); ++m) r.c_[m] = s * j.c_[m];
  return r;
}

Jet operator*(double s, const Jet& j) { return Jet::C(s) * j; }

Jet Jet::deriv(int mu) const {
  Jet r;
  for (int m = 0; m < size(); ++m) {
    auto a = mindex(m);
    a[mu] += 1;
    if (a[0] + a[1] + a[2] > ORDER) continue;
    r.c_[m] = double(a[mu]) * c_[idx(a[0], a[1], a[2])];
  }
  return r;
}

Jet Jet::conj() const {
  Jet r;
  for (int m = 0; m < size(); ++m) r.c_[m] = std::conj(c_[m]);
  return r;
}

Jet Jet::recip() const {
  if (c_[0] == C(0)) throw std::domain_error("jet reciprocal at zero");
  Jet h(C(1.0) / c_[0]);
  Jet two(C(2));
  for (int it = 0; it < 5; ++it) h = h * (two - *this * h);
  return h;
}

Jet Jet::sqrt() const {
  double v = std::real(c_[0]);
  if (!(v > 0)) throw std::domain_error("jet sqrt needs positive base value");
  // h -> 1/sqrt(f) by Newton, then sqrt(f) = f*h.
  Jet h(C(1.0 / std::sqrt(v)));
  Jet three(C(3));
  for (int it = 0; it < 5; ++it) h = 0.5 * (h * (three - *this * h * h));
  return *this * h;
}

Jet::C Jet::eval(double d0, double d1, double d2) const {
  C s(0);
  for (int m = 0; m < size(); ++m) {
    auto a = mindex(m);
    s += c_[m] * std::pow(d0, a[0]) * std::pow(d1, a[1]) * std::pow(d2, a[2]);
  }
  return s;
}

double Jet::max_abs() const {
  double r = 0;
  for (int m = 0; m < size(); ++m) r = std::max(r, std::abs(c_[m]));
  return r;
}

namespace {

// exp(h) for a jet h with vanishing constant term: finite series.
Jet exp_nilpotent(const Jet& h) {
  Jet r(Jet::C(1)), term(Jet::C(1));
  for (int k = 1; k <= Jet::ORDER; ++k) {
    term = (1.0 / k) * (term * h);
    r += term;
  }
  return r;
}

}  // namespace

Jet exp_jet(const Jet& f) {
  Jet h = f - Jet(f.value());
  return std::exp(f.value()) * exp_nilpotent(h);
}

Jet cosh_jet(const Jet& f) { return 0.5 * (exp_jet(f) + exp_jet(-f)); }

Jet sinh_jet(const Jet& f) { return 0.5 * (exp_jet(f) - exp_jet(-f)); }

}  // namespace cssim
