#include "cadflow/plaplacian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <cstdio>
#include <cstdlib>

namespace cadflow {

void WeightField::validate(const GridDomain& g) const {
  const std::size_t nfx = static_cast<std::size_t>((g.nx - 1) * g.ny);
  const std::size_t nfy = g.dim == 2 ? static_cast<std::size_t>(g.nx * (g.ny - 1)) : 0;
  if (faces.x.size() != nfx || faces.y.size() != nfy)
    throw ConfigError("weight field face counts do not match the grid");
  if (!(gamma_min > 0.0) || !(gamma_max >= gamma_min))
    throw ConfigError("weight bounds need 0 < gamma_min <= gamma_max");
  for (double w : faces.x)
    if (!(w >= gamma_min) || !(w <= gamma_max)) throw ConfigError("weight outside recorded bounds");
  for (double w : faces.y)
    if (!(w >= gamma_min) || !(w <= gamma_max)) throw ConfigError("weight outside recorded bounds");
}

WeightField uniform_weight(const GridDomain& g, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("weight must be positive");
  WeightField w;
  w.faces = kernels::FaceValues::zeros(g);
  std::fill(w.faces.x.begin(), w.faces.x.end(), gamma);
  std::fill(w.faces.y.begin(), w.faces.y.end(), gamma);
  w.gamma_min = w.gamma_max = gamma;
  return w;
}

WeightField weight_from_cells(const GridDomain& g, const std::vector<double>& cell_gamma) {
  if (static_cast<int>(cell_gamma.size()) != g.cell_count())
    throw ConfigError("cell weight count does not match the grid");
  for (double c : cell_gamma)
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("cell weights must be positive");

  auto harmonic = [](double a, double b) { return 2.0 * a * b / (a + b); };

  WeightField w;
  w.faces = kernels::FaceValues::zeros(g);
  const int nx = g.nx, ny = g.ny;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix + 1 < nx; ++ix)
      w.faces.x[static_cast<std::size_t>(iy * (nx - 1) + ix)] =
          harmonic(cell_gamma[static_cast<std::size_t>(iy * nx + ix)],
                   cell_gamma[static_cast<std::size_t>(iy * nx + ix + 1)]);
  if (g.dim == 2)
    for (int iy = 0; iy + 1 < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix)
        w.faces.y[static_cast<std::size_t>(iy * nx + ix)] =
            harmonic(cell_gamma[static_cast<std::size_t>(iy * nx + ix)],
                     cell_gamma[static_cast<std::size_t>((iy + 1) * nx + ix)]);

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double v : w.faces.x) lo = std::min(lo, v), hi = std::max(hi, v);
  for (double v : w.faces.y) lo = std::min(lo, v), hi = std::max(hi, v);
  w.gamma_min = lo;
  w.gamma_max = hi;
  return w;
}

void PLaplaceParams::validate() const {
  grid.validate();
  gamma.validate(grid);
  if (!(p > 1.0) || !std::isfinite(p))
    throw ConfigError("exponent p must lie in (1, inf)");
  if (p == 2.0)
    throw ConfigError("p = 2 is excluded by the standing assumption p in (1, inf) \\ {2}");
}

PLaplaceOperator::PLaplaceOperator(PLaplaceParams params) : params_(std::move(params)) {
  params_.validate();
}

StateField PLaplaceOperator::apply(const StateField& u) const {
  require_same_grid(u.grid, params_.grid, "apply_operator");
  kernels::FaceValues flux = kernels::FaceValues::zeros(params_.grid);
  kernels::face_fluxes(params_.grid, params_.p, params_.gamma.faces, u.values, flux);
  StateField out = make_field(params_.grid);
  kernels::flux_divergence(params_.grid, flux, out.values);
  return out;
}

StateField PLaplaceOperator::apply_serial(const StateField& u) const {
  require_same_grid(u.grid, params_.grid, "apply_operator");
  kernels::FaceValues flux = kernels::FaceValues::zeros(params_.grid);
  kernels::face_fluxes_serial(params_.grid, params_.p, params_.gamma.faces, u.values, flux);
  StateField out = make_field(params_.grid);
  kernels::flux_divergence_serial(params_.grid, flux, out.values);
  return out;
}

double PLaplaceOperator::weak_pairing(const StateField& u, const StateField& phi) const {
  require_same_grid(u.grid, params_.grid, "weak_pairing");
  require_same_grid(phi.grid, params_.grid, "weak_pairing");
  return params_.grid.cell_volume() *
         kernels::pairing_sum(params_.grid, params_.p, params_.gamma.faces, u.values, phi.values);
}

double PLaplaceOperator::dirichlet_energy(const StateField& u) const {
  require_same_grid(u.grid, params_.grid, "dirichlet_energy");
  return params_.grid.cell_volume() *
         kernels::energy_sum(params_.grid, params_.p, params_.gamma.faces, u.values);
}

namespace {

constexpr double kHuberEps = 1e-10;  // Jacobian smoothing only; residuals stay exact

// g = u + lam * A u - f ; returns ||g||_inf
double proximal_residual(const PLaplaceParams& prm, double lam, const std::vector<double>& u,
                         const std::vector<double>& f, kernels::FaceValues& flux,
                         std::vector<double>& g) {
  kernels::face_fluxes(prm.grid, prm.p, prm.gamma.faces, u, flux);
  kernels::flux_divergence(prm.grid, flux, g);
  double rinf = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = u[i] + lam * g[i] - f[i];
    rinf = std::max(rinf, std::abs(g[i]));
  }
  return rinf;
}

// merit E(u) = 0.5 ||u - f||^2 + lam * sum_f gamma |D_f u|^p / p (common h^dim
// factor dropped; its gradient is exactly the proximal residual g)
double merit(const PLaplaceParams& prm, double lam, const std::vector<double>& u,
             const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - f[i];
    s += 0.5 * d * d;
  }
  return s + lam * kernels::energy_sum(prm.grid, prm.p, prm.gamma.faces, u);
}

// Smallest residual change a one-ulp state perturbation can produce across a
// face. Below a multiple of this the exact-flux residual is not resolvable in
// double precision (the flux slope blows up at d = 0 for p < 2).
double quantization_floor(const PLaplaceParams& prm, double lam, const std::vector<double>& u) {
  const int nx = prm.grid.nx, ny = prm.grid.ny;
  const double h = prm.grid.h;
  const double eps_m = std::numeric_limits<double>::epsilon();
  double floor_est = 0.0;
  auto face_term = [&](int lo, int hi, double gamma_f) {
    const double ulo = u[static_cast<std::size_t>(lo)], uhi = u[static_cast<std::size_t>(hi)];
    const double d = std::abs(uhi - ulo) / h;
    const double du = 2.0 * eps_m * std::max({std::abs(ulo), std::abs(uhi), 1.0}) / h;
    const double jump = kernels::flux_fn(d + du, prm.p) - kernels::flux_fn(d, prm.p);
    floor_est = std::max(floor_est, lam * gamma_f * jump / h);
  };
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix + 1 < nx; ++ix)
      face_term(iy * nx + ix, iy * nx + ix + 1,
                prm.gamma.faces.x[static_cast<std::size_t>(iy * (nx - 1) + ix)]);
  if (prm.grid.dim == 2)
    for (int iy = 0; iy + 1 < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix)
        face_term(iy * nx + ix, (iy + 1) * nx + ix,
                  prm.gamma.faces.y[static_cast<std::size_t>(iy * nx + ix)]);
  return floor_est;
}

// In 1D the Newton matrix I + lam * L_w is tridiagonal; solve it directly
// (Thomas). Diagonal dominance makes the elimination stable without pivoting.
void solve_tridiagonal(const GridDomain& g, double lam, const kernels::FaceValues& w,
                       const std::vector<double>& b, std::vector<double>& x,
                       std::vector<double>& diag, std::vector<double>& rhs) {
  const std::size_t n = b.size();
  const double c = lam / (g.h * g.h);
  kernels::shifted_laplacian_diagonal(g, lam, w, diag);
  rhs = b;
  // forward elimination; the subdiagonal/superdiagonal entry at face i is -c*w_i
  for (std::size_t i = 1; i < n; ++i) {
    const double off = -c * w.x[i - 1];
    const double m = off / diag[i - 1];
    diag[i] -= m * off;
    rhs[i] -= m * rhs[i - 1];
  }
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    const double off = -c * w.x[i];
    x[i] = (rhs[i] - off * x[i + 1]) / diag[i];
  }
}

// Jacobi-preconditioned CG on (I + lam * L_w) x = b. Returns iterations used.
int solve_cg(const GridDomain& g, double lam, const kernels::FaceValues& w,
             const std::vector<double>& b, std::vector<double>& x, std::vector<double>& diag,
             std::vector<double>& r, std::vector<double>& z, std::vector<double>& q,
             std::vector<double>& Aq) {
  const std::size_t n = b.size();
  kernels::shifted_laplacian_diagonal(g, lam, w, diag);
  std::fill(x.begin(), x.end(), 0.0);
  r = b;
  double binf = 0.0;
  for (double v : b) binf = std::max(binf, std::abs(v));
  const double tol = std::max(1e-10 * binf, 1e-300);
  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  q = z;
  double rz = kernels::dot(r, z);
  const int max_cg = 4 * static_cast<int>(n) + 50;
  int it = 0;
  for (; it < max_cg; ++it) {
    double rinf = 0.0;
    for (double v : r) rinf = std::max(rinf, std::abs(v));
    if (rinf <= tol) break;
    kernels::shifted_laplacian_matvec(g, lam, w, q, Aq);
    const double qAq = kernels::dot(q, Aq);
    if (!(qAq > 0.0)) break;  // cannot happen for SPD up to rounding
    const double alpha = rz / qAq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * q[i];
      r[i] -= alpha * Aq[i];
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    const double rz_new = kernels::dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) q[i] = z[i] + beta * q[i];
  }
  return it;
}

int solve_newton_system(const GridDomain& g, double lam, const kernels::FaceValues& w,
                        const std::vector<double>& b, std::vector<double>& x,
                        std::vector<double>& diag, std::vector<double>& r, std::vector<double>& z,
                        std::vector<double>& q, std::vector<double>& Aq) {
  if (g.dim == 1) {
    solve_tridiagonal(g, lam, w, b, x, diag, r);
    return 1;
  }
  return solve_cg(g, lam, w, b, x, diag, r, z, q, Aq);
}

}  // namespace

StateField PLaplaceOperator::resolvent(double lambda, const StateField& f, double tol,
                                       int max_iters, ResolventStats* stats) const {
  if (!(lambda > 0.0)) throw DomainError("resolvent needs lambda > 0");
  if (!(tol > 0.0)) throw DomainError("resolvent needs tol > 0");
  if (max_iters < 1) throw DomainError("resolvent needs max_iters >= 1");
  require_same_grid(f.grid, params_.grid, "resolvent");
  if (!f.all_finite()) throw NumericError("resolvent input has non-finite entries");

  const GridDomain& g = params_.grid;
  const std::size_t n = static_cast<std::size_t>(g.cell_count());

  StateField u = f;  // warm start; constants converge immediately
  kernels::FaceValues flux = kernels::FaceValues::zeros(g);
  kernels::FaceValues slopes = kernels::FaceValues::zeros(g);
  kernels::FaceValues secant_w = kernels::FaceValues::zeros(g);
  std::vector<double> grad(n), grad_trial(n), delta(n), diag(n), cg_r(n), cg_z(n), cg_q(n),
      cg_Aq(n), trial(n), neg_g(n);

  double r = proximal_residual(params_, lambda, u.values, f.values, flux, grad);
  std::vector<double> trace{r};
  double E = merit(params_, lambda, u.values, f.values);

  std::vector<double> best_u = u.values;
  double best_r = r;
  double progress_r = r;
  int progress_iter = 0;
  const double r_scale = std::max(1.0, r);
  // Below this the merit can no longer resolve progress in double precision,
  // so acceptance switches from Armijo on E to strict residual decrease.
  const double endgame_r = 1e-6 * r_scale;

  std::vector<double> prev_u, prev_g;
  bool stagnated = false;
  int cg_total = 0;
  int iter = 0;

  // For p < 2 the tangent (Newton) model is poor across flux sign changes, so
  // the first phase uses the secant weights flux(d)/d = |d|^{p-2}. That is the
  // lagged-diffusivity iteration, which majorizes the merit for p < 2; the
  // tangent phase then finishes quadratically. For p > 2 tangent Newton with
  // Armijo damping is already globally convergent.
  for (; iter < max_iters && r > tol; ++iter) {
    kernels::face_slopes(g, params_.p, kHuberEps, params_.gamma.faces, u.values, slopes);
    const bool start_secant = params_.p < 2.0 && r > 1e-4 * r_scale;

    auto compute_direction = [&](int kind) {
      // kind: 0 tangent, 1 secant, 2 preconditioned steepest descent
      double gd;
      if (kind == 2) {
        double dmax = 1.0;
        for (double v : diag) dmax = std::max(dmax, v);
        for (std::size_t i = 0; i < n; ++i) delta[i] = -grad[i] / dmax;
        gd = kernels::dot(grad, delta);
        return gd;
      }
      const kernels::FaceValues* w = &slopes;
      if (kind == 1) {
        // secant weight = tangent weight / (p - 1)
        const double inv = 1.0 / (params_.p - 1.0);
        secant_w.x = slopes.x;
        secant_w.y = slopes.y;
        for (double& v : secant_w.x) v *= inv;
        for (double& v : secant_w.y) v *= inv;
        w = &secant_w;
      }
      for (std::size_t i = 0; i < n; ++i) neg_g[i] = -grad[i];
      cg_total += solve_newton_system(g, lambda, *w, neg_g, delta, diag, cg_r, cg_z, cg_q, cg_Aq);
      gd = kernels::dot(grad, delta);
      if (!(gd < 0.0)) {
        double dmax = 1.0;
        for (double v : diag) dmax = std::max(dmax, v);
        for (std::size_t i = 0; i < n; ++i) delta[i] = -grad[i] / dmax;
        gd = kernels::dot(grad, delta);
      }
      return gd;
    };

    // On success leaves the accepted state in trial / grad_trial / r_t / E_t.
    double r_t = 0.0, E_t = 0.0;
    auto try_direction = [&](double gd) {
      double alpha = 1.0;
      const bool residual_mode = r <= endgame_r;
      while (alpha > 1e-13) {
        for (std::size_t i = 0; i < n; ++i) trial[i] = u.values[i] + alpha * delta[i];
        if (residual_mode) {
          r_t = proximal_residual(params_, lambda, trial, f.values, flux, grad_trial);
          if (r_t < r) {
            E_t = merit(params_, lambda, trial, f.values);
            return true;
          }
        } else {
          E_t = merit(params_, lambda, trial, f.values);
          if (E_t <= E + 1e-4 * alpha * gd) {
            r_t = proximal_residual(params_, lambda, trial, f.values, flux, grad_trial);
            return true;
          }
        }
        alpha *= 0.5;
      }
      return false;
    };

    bool ok = try_direction(compute_direction(start_secant ? 1 : 0));
    if (!ok && params_.p < 2.0) ok = try_direction(compute_direction(start_secant ? 0 : 1));
    if (!ok && !prev_u.empty()) {
      // Barzilai-Borwein gradient step; <s,y> >= ||s||^2 by monotonicity
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double s = u.values[i] - prev_u[i];
        const double y = grad[i] - prev_g[i];
        ss += s * s;
        sy += s * y;
      }
      const double step = (sy > 0.0 && ss > 0.0) ? ss / sy : 1.0;
      for (std::size_t i = 0; i < n; ++i) delta[i] = -step * grad[i];
      ok = try_direction(kernels::dot(grad, delta));
    }
    if (!ok) {
      stagnated = true;  // no representable step makes progress
      break;
    }

    prev_u = u.values;
    prev_g = grad;
    u.values = trial;
    grad = grad_trial;
    r = r_t;
    E = E_t;
    trace.push_back(r);
    if (r < best_r) {
      best_r = r;
      best_u = u.values;
    }
    if (r < 0.999 * progress_r) {
      progress_r = r;
      progress_iter = iter + 1;
    }
    // residual creep below 0.1% per iteration for a dozen iterations: treat
    // as the floating-point floor
    if (iter + 1 - progress_iter >= 12) {
      stagnated = true;
      ++iter;
      break;
    }
  }

  bool accepted = best_r <= tol;
  if (!accepted && stagnated) {
    // Stagnation at the floating-point floor: no representable step improves
    // further. Accept only when the residual is consistent with the flux
    // quantization / merit resolution scales for this state.
    const double quant_cap = 32.0 * quantization_floor(params_, lambda, best_u);
    const double merit_cap =
        8.0 * std::sqrt(std::numeric_limits<double>::epsilon() * std::max(E, 0.0));
    if (std::getenv("CADFLOW_SOLVER_DEBUG"))
      std::fprintf(stderr, "[stagnation] p=%g lam=%g best_r=%.3e quant_cap=%.3e merit_cap=%.3e E=%.3e finf=%.3e iters=%d\n",
                   params_.p, lambda, best_r, quant_cap, merit_cap, E, f.norm_linf(), iter);
    if (best_r <= std::max({tol, quant_cap, merit_cap}) &&
        best_r <= 1e-5 * (1.0 + f.norm_linf()))
      accepted = true;
  }

  u.values = best_u;
  const double final_inf = proximal_residual(params_, lambda, u.values, f.values, flux, grad);
  if (stats) {
    double l1 = 0.0;
    for (double v : grad) l1 += std::abs(v);
    stats->newton_iters = iter;
    stats->cg_iters = cg_total;
    stats->final_residual = final_inf;
    stats->final_residual_l1 = l1 * g.cell_volume();
    stats->residual_trace = trace;
  }
  if (!accepted) {
    throw SolverError("resolvent solve did not reach the requested tolerance", std::move(trace));
  }
  return u;
}

}  // namespace cadflow
