#include "cssim/test_fields.hpp"

namespace cssim {

void TestFieldSuite::set_random_base() {
  std::uniform_real_distribution<double> u(-1, 1);
  double t = 2.5 + u(rng_);
  double r = 0.7 * t * std::abs(u(rng_));
  double th = 3.14159265358979323846 * u(rng_);
  base_ = {t, r * std::cos(th), r * std::sin(th)};
}

void TestFieldSuite::set_base(double t, double x1, double x2) {
  base_ = {t, x1, x2};
}

double TestFieldSuite::uniform() {
  std::uniform_real_distribution<double> u(-1, 1);
  return u(rng_);
}

namespace {

Jet random_poly(std::mt19937_64& rng, const std::array<double, 3>& base,
                int max_deg, bool complex_coeffs) {
  (void)base;
  std::uniform_real_distribution<double> u(-1, 1);
  // Taylor coefficients Uniform(-1,1) drawn directly at the base point: the
  // field is the polynomial sum c_a (x - p)^a of total degree <= max_deg,
  // which keeps all jet coefficients O(1) and identity residuals near
  // rounding level.
  Jet r(0.0);
  for (int m = 0; m < Jet::size(); ++m) {
    const auto& a = Jet::mindex(m);
    if (a[0] + a[1] + a[2] > max_deg) continue;
    r[m] = std::complex<double>(u(rng), complex_coeffs ? u(rng) : 0.0);
  }
  return r;
}

}  // namespace

JetForm TestFieldSuite::random_form(int degree, Kind kind, const Representation& rep,
                                    int max_deg) {
  JetForm f(degree, kind, coeff_dim(kind, rep));
  bool cplx = kind == Kind::multiplet;
  for (auto& c : f.comp)
    for (auto& entry : c) entry = random_poly(rng_, base_, max_deg, cplx);
  return f;
}

JetVec TestFieldSuite::random_vector(int max_deg) {
  JetVec X;
  for (int mu = 0; mu < 3; ++mu) X.x[mu] = random_poly(rng_, base_, max_deg, false);
  return X;
}

JetVec TestFieldSuite::translation(int mu) const {
  JetVec X;
  X.x[mu] = Jet(1.0);
  return X;
}

JetVec TestFieldSuite::lorentz(int mu, int nu) const {
  // Z_{mu nu} = x_mu d_nu - x_nu d_mu with x_mu = eta_{mu lambda} x^lambda.
  auto lower = [&](int m) {
    Jet x = coord(m);
    return m == 0 ? -1.0 * x : x;
  };
  JetVec X;
  X.x[nu] += lower(mu);
  X.x[mu] -= lower(nu);
  return X;
}

JetVec TestFieldSuite::scaling() const {
  JetVec X;
  for (int mu = 0; mu < 3; ++mu) X.x[mu] = coord(mu);
  return X;
}

double value_residual(const JetForm& a, const JetForm& b) {
  double r = 0;
  for (size_t c = 0; c < a.comp.size(); ++c)
    for (size_t i = 0; i < a.comp[c].size(); ++i)
      r = std::max(r, std::abs(a.comp[c][i].value() - b.comp[c][i].value()));
  return r;
}

}  // namespace cssim
