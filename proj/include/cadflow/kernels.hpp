#ifndef CADFLOW_KERNELS_HPP
#define CADFLOW_KERNELS_HPP

#include <cmath>
#include <vector>

#include "cadflow/grid.hpp"

// Low-level face/cell kernels of the discrete weighted p-Laplacian.
//
// Face layout on an nx x ny cell grid:
//   x faces separate (ix,iy) and (ix+1,iy); index iy*(nx-1)+ix; count (nx-1)*ny
//   y faces separate (ix,iy) and (ix,iy+1); index iy*nx+ix;     count nx*(ny-1)
// Boundary faces carry zero flux, so they are simply not stored.
//
// Each kernel has an OpenMP variant (default entry point) and a serial
// reference variant used by the tests and the benchmark. The parallel
// variants write each output element from exactly one iteration, so they are
// bit-identical to the serial ones for any thread count. Reductions (dot,
// energy, pairing) are kept serial in the solve path so that artifacts do not
// depend on the thread count; _omp reduction variants exist for the benchmark.

namespace cadflow::kernels {

// flux nonlinearity |d|^{p-2} d, extended by 0 at d = 0
inline double flux_fn(double d, double p) {
  if (d == 0.0) return 0.0;
  return std::pow(std::abs(d), p - 2.0) * d;
}

// Slope of flux_fn with a Huber-style smoothing d^2 -> d^2 + eps^2. Used only
// inside Jacobians; residuals always use the exact flux_fn.
inline double flux_slope(double d, double p, double eps) {
  return (p - 1.0) * std::pow(d * d + eps * eps, 0.5 * (p - 2.0));
}

struct FaceValues {
  std::vector<double> x;  // per x face
  std::vector<double> y;  // per y face (empty in 1D)

  static FaceValues zeros(const GridDomain& g) {
    FaceValues fv;
    fv.x.assign(static_cast<std::size_t>((g.nx - 1) * g.ny), 0.0);
    if (g.dim == 2) fv.y.assign(static_cast<std::size_t>(g.nx * (g.ny - 1)), 0.0);
    return fv;
  }
};

// face differences D_f u = (u_hi - u_lo)/h
void face_gradients(const GridDomain& g, const std::vector<double>& u, FaceValues& out);
void face_gradients_serial(const GridDomain& g, const std::vector<double>& u, FaceValues& out);

// flux_f = w_f * flux_fn(D_f u)
void face_fluxes(const GridDomain& g, double p, const FaceValues& w, const std::vector<double>& u,
                 FaceValues& out);
void face_fluxes_serial(const GridDomain& g, double p, const FaceValues& w,
                        const std::vector<double>& u, FaceValues& out);

// Jacobian face weights w_f * flux_slope(D_f u)
void face_slopes(const GridDomain& g, double p, double eps, const FaceValues& w,
                 const std::vector<double>& u, FaceValues& out);

// (div F)_i with zero-flux boundary: out_i = (1/h) (sum over faces with i on
// the high side of F_f  -  sum over faces with i on the low side of F_f)
void flux_divergence(const GridDomain& g, const FaceValues& flux, std::vector<double>& out);
void flux_divergence_serial(const GridDomain& g, const FaceValues& flux, std::vector<double>& out);

// out = x + lam * L_w x where L_w is the graph Laplacian with face weights
// w_f / h^2: (L_w x)_i = (1/h^2) sum_{faces f at i} w_f (x_i - x_nbr)
void shifted_laplacian_matvec(const GridDomain& g, double lam, const FaceValues& w,
                              const std::vector<double>& x, std::vector<double>& out);
void shifted_laplacian_matvec_serial(const GridDomain& g, double lam, const FaceValues& w,
                                     const std::vector<double>& x, std::vector<double>& out);

// diag(I + lam * L_w), the Jacobi preconditioner of the Newton system
void shifted_laplacian_diagonal(const GridDomain& g, double lam, const FaceValues& w,
                                std::vector<double>& out);

// serial canonical reductions
double dot(const std::vector<double>& a, const std::vector<double>& b);
double energy_sum(const GridDomain& g, double p, const FaceValues& w, const std::vector<double>& u);
double pairing_sum(const GridDomain& g, double p, const FaceValues& w, const std::vector<double>& u,
                   const std::vector<double>& phi);

// OpenMP reduction variants (benchmark only; summation order differs)
double energy_sum_omp(const GridDomain& g, double p, const FaceValues& w,
                      const std::vector<double>& u);
double dot_omp(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace cadflow::kernels

#endif
