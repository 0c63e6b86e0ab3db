#ifndef CSSIM_STATE_HPP
#define CSSIM_STATE_HPP

#include <complex>
#include <vector>

namespace cssim {

/// Uniform square grid centered at the origin; node i carries coordinate
/// (i - (n-1)/2) h, so the half-width is L = n h / 2 and no node sits at the
/// exact center for even n.
struct SpatialGrid {
  int n = 0;
  double h = 0;

  double half_width() const { return 0.5 * n * h; }
  double coord(int i) const { return (i - 0.5 * (n - 1)) * h; }
  int size() const { return n * n; }
};

/// Temporal-gauge evolution variables on a SpatialGrid.
///
/// phi and pi = d_t phi are V-valued (vd complex entries per node); the
/// spatial connection components a_1, a_2 and the auxiliary scalar b are
/// Lie-algebra valued (gd real entries per node).  Layout: node (i,j) at
/// flat index i*n+j, coefficients contiguous per node.
struct SimState {
  double t = 0;
  SpatialGrid grid;
  int vd = 1;  ///< complex dimension of V
  int gd = 1;  ///< dimension of the gauge algebra

  std::vector<std::complex<double>> phi, pi;  ///< size n*n*vd
  std::vector<double> a1, a2, b;              ///< size n*n*gd

  void resize() {
    phi.assign(size_t(grid.size()) * vd, {});
    pi.assign(size_t(grid.size()) * vd, {});
    a1.assign(size_t(grid.size()) * gd, 0.0);
    a2.assign(size_t(grid.size()) * gd, 0.0);
    b.assign(size_t(grid.size()) * gd, 0.0);
  }

  std::complex<double>* phi_at(int i, int j) { return &phi[(size_t(i) * grid.n + j) * vd]; }
  const std::complex<double>* phi_at(int i, int j) const { return &phi[(size_t(i) * grid.n + j) * vd]; }
  std::complex<double>* pi_at(int i, int j) { return &pi[(size_t(i) * grid.n + j) * vd]; }
  const std::complex<double>* pi_at(int i, int j) const { return &pi[(size_t(i) * grid.n + j) * vd]; }
  double* a1_at(int i, int j) { return &a1[(size_t(i) * grid.n + j) * gd]; }
  const double* a1_at(int i, int j) const { return &a1[(size_t(i) * grid.n + j) * gd]; }
  double* a2_at(int i, int j) { return &a2[(size_t(i) * grid.n + j) * gd]; }
  const double* a2_at(int i, int j) const { return &a2[(size_t(i) * grid.n + j) * gd]; }
  double* b_at(int i, int j) { return &b[(size_t(i) * grid.n + j) * gd]; }
  const double* b_at(int i, int j) const { return &b[(size_t(i) * grid.n + j) * gd]; }
};

}  // namespace cssim

#endif
