#ifndef CSSIM_JET_HPP
#define CSSIM_JET_HPP

#include <array>
#include <cassert>
#include <cmath>
#include <complex>
#include <vector>

namespace cssim {

/// Truncated Taylor expansion (order <= JET_ORDER) in the three coordinates
/// x^0, x^1, x^2 around a base point, with complex coefficients.
///
/// Jets give exact pointwise derivatives: any differential-operator
/// composition that consumes at most JET_ORDER derivatives yields the exact
/// value at the base point, free of truncation error.  Arithmetic truncates
/// products at total degree JET_ORDER; reciprocal and square root are
/// computed by Newton iteration on jets.
class Jet {
 public:
  static constexpr int ORDER = 8;
  using C = std::complex<double>;

  Jet() : c_(size(), C(0)) {}
  explicit Jet(C v) : Jet() { c_[0] = v; }
  explicit Jet(double v) : Jet(C(v)) {}

  /// Number of multi-indices (i,j,k) with i+j+k <= ORDER.
  static int size();
  /// Flat index of the multi-index (i,j,k).
  static int idx(int i, int j, int k);
  /// Multi-index of flat index m.
  static const std::array<int, 3>& mindex(int m);

  /// The coordinate function x^mu expanded at base value v: v + dx^mu.
  static Jet var(int mu, double v);

  C value() const { return c_[0]; }
  C& operator[](int m) { return c_[m]; }
  const C& operator[](int m) const { return c_[m]; }

  Jet operator+(const Jet& o) const;
  Jet operator-(const Jet& o) const;
  Jet operator-() const;
  Jet operator*(const Jet& o) const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  friend Jet operator*(C s, const Jet& j);
  friend Jet operator*(double s, const Jet& j);

  /// Partial derivative with respect to x^mu (loses one valid order).
  Jet deriv(int mu) const;
  /// Coefficient-wise complex conjugate (= jet of the conjugate function).
  Jet conj() const;
  /// 1/f; requires f(base) != 0.
  Jet recip() const;
  /// sqrt(f) for f(base) real positive.
  Jet sqrt() const;
  /// Evaluate the truncated polynomial at offset (d0,d1,d2) from the base.
  C eval(double d0, double d1, double d2) const;

  double max_abs() const;

 private:
  std::vector<C> c_;
};

Jet exp_jet(const Jet& f);
Jet cosh_jet(const Jet& f);
Jet sinh_jet(const Jet& f);

}  // namespace cssim

#endif
