#include "cadflow/kernels.hpp"

namespace cadflow::kernels {

namespace {

// Shared loop bodies; the omp entry points add the pragma, the serial ones do
// not, and both execute identical per-element arithmetic. Grids below the
// threshold run serially either way: spawning a parallel region costs more
// than the loop at desk scale, and the arithmetic is identical.
constexpr int kParallelThreshold = 16384;

inline void face_gradients_body(const GridDomain& g, const std::vector<double>& u, FaceValues& out,
                                bool parallel) {
  const int nx = g.nx, ny = g.ny;
  const double inv_h = 1.0 / g.h;
  const int nfx = (nx - 1) * ny;
#pragma omp parallel for schedule(static) if (parallel && nfx >= kParallelThreshold)
  for (int f = 0; f < nfx; ++f) {
    const int iy = f / (nx - 1);
    const int ix = f % (nx - 1);
    const int lo = iy * nx + ix;
    out.x[static_cast<std::size_t>(f)] = (u[static_cast<std::size_t>(lo + 1)] - u[static_cast<std::size_t>(lo)]) * inv_h;
  }
  if (g.dim == 2) {
    const int nfy = nx * (ny - 1);
#pragma omp parallel for schedule(static) if (parallel && nfy >= kParallelThreshold)
    for (int f = 0; f < nfy; ++f) {
      const int lo = f;  // (ix, iy) with iy = f / nx
      out.y[static_cast<std::size_t>(f)] = (u[static_cast<std::size_t>(lo + nx)] - u[static_cast<std::size_t>(lo)]) * inv_h;
    }
  }
}

inline void face_fluxes_body(const GridDomain& g, double p, const FaceValues& w,
                             const std::vector<double>& u, FaceValues& out, bool parallel) {
  const int nx = g.nx, ny = g.ny;
  const double inv_h = 1.0 / g.h;
  const int nfx = (nx - 1) * ny;
#pragma omp parallel for schedule(static) if (parallel && nfx >= kParallelThreshold)
  for (int f = 0; f < nfx; ++f) {
    const int iy = f / (nx - 1);
    const int ix = f % (nx - 1);
    const int lo = iy * nx + ix;
    const double d = (u[static_cast<std::size_t>(lo + 1)] - u[static_cast<std::size_t>(lo)]) * inv_h;
    out.x[static_cast<std::size_t>(f)] = w.x[static_cast<std::size_t>(f)] * flux_fn(d, p);
  }
  if (g.dim == 2) {
    const int nfy = nx * (ny - 1);
#pragma omp parallel for schedule(static) if (parallel && nfy >= kParallelThreshold)
    for (int f = 0; f < nfy; ++f) {
      const int lo = f;
      const double d = (u[static_cast<std::size_t>(lo + nx)] - u[static_cast<std::size_t>(lo)]) * inv_h;
      out.y[static_cast<std::size_t>(f)] = w.y[static_cast<std::size_t>(f)] * flux_fn(d, p);
    }
  }
}

inline void flux_divergence_body(const GridDomain& g, const FaceValues& flux,
                                 std::vector<double>& out, bool parallel) {
  const int nx = g.nx, ny = g.ny;
  const double inv_h = 1.0 / g.h;
  const int n = g.cell_count();
#pragma omp parallel for schedule(static) if (parallel && n >= kParallelThreshold)
  for (int i = 0; i < n; ++i) {
    const int iy = i / nx;
    const int ix = i % nx;
    double acc = 0.0;
    if (ix > 0) acc += flux.x[static_cast<std::size_t>(iy * (nx - 1) + ix - 1)];   // i on high side
    if (ix < nx - 1) acc -= flux.x[static_cast<std::size_t>(iy * (nx - 1) + ix)];  // i on low side
    if (g.dim == 2) {
      if (iy > 0) acc += flux.y[static_cast<std::size_t>((iy - 1) * nx + ix)];
      if (iy < ny - 1) acc -= flux.y[static_cast<std::size_t>(iy * nx + ix)];
    }
    out[static_cast<std::size_t>(i)] = acc * inv_h;
  }
}

inline void matvec_body(const GridDomain& g, double lam, const FaceValues& w,
                        const std::vector<double>& x, std::vector<double>& out, bool parallel) {
  const int nx = g.nx, ny = g.ny;
  const double c = lam / (g.h * g.h);
  const int n = g.cell_count();
#pragma omp parallel for schedule(static) if (parallel && n >= kParallelThreshold)
  for (int i = 0; i < n; ++i) {
    const int iy = i / nx;
    const int ix = i % nx;
    const double xi = x[static_cast<std::size_t>(i)];
    double acc = 0.0;
    if (ix > 0) {
      const double wf = w.x[static_cast<std::size_t>(iy * (nx - 1) + ix - 1)];
      acc += wf * (xi - x[static_cast<std::size_t>(i - 1)]);
    }
    if (ix < nx - 1) {
      const double wf = w.x[static_cast<std::size_t>(iy * (nx - 1) + ix)];
      acc += wf * (xi - x[static_cast<std::size_t>(i + 1)]);
    }
    if (g.dim == 2) {
      if (iy > 0) {
        const double wf = w.y[static_cast<std::size_t>((iy - 1) * nx + ix)];
        acc += wf * (xi - x[static_cast<std::size_t>(i - nx)]);
      }
      if (iy < ny - 1) {
        const double wf = w.y[static_cast<std::size_t>(iy * nx + ix)];
        acc += wf * (xi - x[static_cast<std::size_t>(i + nx)]);
      }
    }
    out[static_cast<std::size_t>(i)] = xi + c * acc;
  }
}

}  // namespace

void face_gradients(const GridDomain& g, const std::vector<double>& u, FaceValues& out) {
  face_gradients_body(g, u, out, true);
}
void face_gradients_serial(const GridDomain& g, const std::vector<double>& u, FaceValues& out) {
  face_gradients_body(g, u, out, false);
}

void face_fluxes(const GridDomain& g, double p, const FaceValues& w, const std::vector<double>& u,
                 FaceValues& out) {
  face_fluxes_body(g, p, w, u, out, true);
}
void face_fluxes_serial(const GridDomain& g, double p, const FaceValues& w,
                        const std::vector<double>& u, FaceValues& out) {
  face_fluxes_body(g, p, w, u, out, false);
}

void face_slopes(const GridDomain& g, double p, double eps, const FaceValues& w,
                 const std::vector<double>& u, FaceValues& out) {
  const int nx = g.nx, ny = g.ny;
  const double inv_h = 1.0 / g.h;
  const int nfx = (nx - 1) * ny;
#pragma omp parallel for schedule(static) if (nfx >= kParallelThreshold)
  for (int f = 0; f < nfx; ++f) {
    const int iy = f / (nx - 1);
    const int ix = f % (nx - 1);
    const int lo = iy * nx + ix;
    const double d = (u[static_cast<std::size_t>(lo + 1)] - u[static_cast<std::size_t>(lo)]) * inv_h;
    out.x[static_cast<std::size_t>(f)] = w.x[static_cast<std::size_t>(f)] * flux_slope(d, p, eps);
  }
  if (g.dim == 2) {
    const int nfy = nx * (ny - 1);
#pragma omp parallel for schedule(static) if (nfy >= kParallelThreshold)
    for (int f = 0; f < nfy; ++f) {
      const int lo = f;
      const double d = (u[static_cast<std::size_t>(lo + nx)] - u[static_cast<std::size_t>(lo)]) * inv_h;
      out.y[static_cast<std::size_t>(f)] = w.y[static_cast<std::size_t>(f)] * flux_slope(d, p, eps);
    }
  }
}

void flux_divergence(const GridDomain& g, const FaceValues& flux, std::vector<double>& out) {
  flux_divergence_body(g, flux, out, true);
}
void flux_divergence_serial(const GridDomain& g, const FaceValues& flux, std::vector<double>& out) {
  flux_divergence_body(g, flux, out, false);
}

void shifted_laplacian_matvec(const GridDomain& g, double lam, const FaceValues& w,
                              const std::vector<double>& x, std::vector<double>& out) {
  matvec_body(g, lam, w, x, out, true);
}
void shifted_laplacian_matvec_serial(const GridDomain& g, double lam, const FaceValues& w,
                                     const std::vector<double>& x, std::vector<double>& out) {
  matvec_body(g, lam, w, x, out, false);
}

void shifted_laplacian_diagonal(const GridDomain& g, double lam, const FaceValues& w,
                                std::vector<double>& out) {
  const int nx = g.nx, ny = g.ny;
  const double c = lam / (g.h * g.h);
  const int n = g.cell_count();
  for (int i = 0; i < n; ++i) {
    const int iy = i / nx;
    const int ix = i % nx;
    double acc = 0.0;
    if (ix > 0) acc += w.x[static_cast<std::size_t>(iy * (nx - 1) + ix - 1)];
    if (ix < nx - 1) acc += w.x[static_cast<std::size_t>(iy * (nx - 1) + ix)];
    if (g.dim == 2) {
      if (iy > 0) acc += w.y[static_cast<std::size_t>((iy - 1) * nx + ix)];
      if (iy < ny - 1) acc += w.y[static_cast<std::size_t>(iy * nx + ix)];
    }
    out[static_cast<std::size_t>(i)] = 1.0 + c * acc;
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double energy_sum(const GridDomain& g, double p, const FaceValues& w,
                  const std::vector<double>& u) {
  const int nx = g.nx, ny = g.ny;
  const double inv_h = 1.0 / g.h;
  double s = 0.0;
  const int nfx = (nx - 1) * ny;
  for (int f = 0; f < nfx; ++f) {
    const int iy = f / (nx - 1);
    const int ix = f % (nx - 1);
    const int lo = iy * nx + ix;
    const double d = (u[static_cast<std::size_t>(lo + 1)] - u[static_cast<std::size_t>(lo)]) * inv_h;
    s += w.x[static_cast<std::size_t>(f)] * std::pow(std::abs(d), p);
  }
  if (g.dim == 2) {
    const int nfy = nx * (ny - 1);
    for (int f = 0; f < nfy; ++f) {
      const int lo = f;
      const double d = (u[static_cast<std::size_t>(lo + nx)] - u[static_cast<std::size_t>(lo)]) * inv_h;
      s += w.y[static_cast<std::size_t>(f)] * std::pow(std::abs(d), p);
    }
  }
  return s / p;
}

double pairing_sum(const GridDomain& g, double p, const FaceValues& w, const std::vector<double>& u,
                   const std::vector<double>& phi) {
  const int nx = g.nx, ny = g.ny;
  const double inv_h = 1.0 / g.h;
  double s = 0.0;
  const int nfx = (nx - 1) * ny;
  for (int f = 0; f < nfx; ++f) {
    const int iy = f / (nx - 1);
    const int ix = f % (nx - 1);
    const int lo = iy * nx + ix;
    const double du = (u[static_cast<std::size_t>(lo + 1)] - u[static_cast<std::size_t>(lo)]) * inv_h;
    const double dp = (phi[static_cast<std::size_t>(lo + 1)] - phi[static_cast<std::size_t>(lo)]) * inv_h;
    s += w.x[static_cast<std::size_t>(f)] * flux_fn(du, p) * dp;
  }
  if (g.dim == 2) {
    const int nfy = nx * (ny - 1);
    for (int f = 0; f < nfy; ++f) {
      const int lo = f;
      const double du = (u[static_cast<std::size_t>(lo + nx)] - u[static_cast<std::size_t>(lo)]) * inv_h;
      const double dp = (phi[static_cast<std::size_t>(lo + nx)] - phi[static_cast<std::size_t>(lo)]) * inv_h;
      s += w.y[static_cast<std::size_t>(f)] * flux_fn(du, p) * dp;
    }
  }
  return s;
}

double energy_sum_omp(const GridDomain& g, double p, const FaceValues& w,
                      const std::vector<double>& u) {
  const int nx = g.nx, ny = g.ny;
  const double inv_h = 1.0 / g.h;
  double s = 0.0;
  const int nfx = (nx - 1) * ny;
#pragma omp parallel for schedule(static) reduction(+ : s)
  for (int f = 0; f < nfx; ++f) {
    const int iy = f / (nx - 1);
    const int ix = f % (nx - 1);
    const int lo = iy * nx + ix;
    const double d = (u[static_cast<std::size_t>(lo + 1)] - u[static_cast<std::size_t>(lo)]) * inv_h;
    s += w.x[static_cast<std::size_t>(f)] * std::pow(std::abs(d), p);
  }
  if (g.dim == 2) {
    const int nfy = nx * (ny - 1);
#pragma omp parallel for schedule(static) reduction(+ : s)
    for (int f = 0; f < nfy; ++f) {
      const int lo = f;
      const double d = (u[static_cast<std::size_t>(lo + nx)] - u[static_cast<std::size_t>(lo)]) * inv_h;
      s += w.y[static_cast<std::size_t>(f)] * std::pow(std::abs(d), p);
    }
  }
  return s / p;
}

double dot_omp(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  const int n = static_cast<int>(a.size());
#pragma omp parallel for schedule(static) reduction(+ : s)
  for (int i = 0; i < n; ++i) s += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
  return s;
}

}  // namespace cadflow::kernels
