#ifndef CADFLOW_SEMIGROUP_HPP
#define CADFLOW_SEMIGROUP_HPP

#include <vector>

#include "cadflow/grid.hpp"

namespace cadflow {

struct ResolventStats {
  int newton_iters = 0;
  int cg_iters = 0;
  double final_residual = 0.0;     // ||u + lambda A u - f||_inf at return
  double final_residual_l1 = 0.0;  // same residual in L^1, feeds slack budgets
  std::vector<double> residual_trace;
};

// Accumulated backward-error budget of a chain of resolvent solves. Each call
// returns the exact solution of u + lambda A u = f + e, so L^1 contraction
// bounds degrade by at most the summed ||e||_1.
struct EvolveStats {
  int resolvent_calls = 0;
  double slack_l1 = 0.0;
  double slack_linf = 0.0;

  void absorb(const ResolventStats& s) {
    ++resolvent_calls;
    slack_l1 += s.final_residual_l1;
    slack_linf += s.final_residual;
  }
};

// Contract of an m-accretive operator on the grid space: an everywhere-defined
// single-valued action A u and a resolvent solve u + lambda A u = f whose
// solution map is an L^1 contraction for every lambda > 0.
class AccretiveOperator {
 public:
  virtual ~AccretiveOperator() = default;

  virtual const GridDomain& grid() const = 0;

  // generator action A u
  virtual StateField apply(const StateField& u) const = 0;

  // solves u + lambda * A u = f to ||u + lambda A u - f||_inf <= tol
  virtual StateField resolvent(double lambda, const StateField& f, double tol, int max_iters,
                               ResolventStats* stats) const = 0;

  StateField resolvent(double lambda, const StateField& f, double tol) const {
    return resolvent(lambda, f, tol, 200, nullptr);
  }
};

struct EvolveConfig {
  int steps_per_unit_time = 32;
  double resolvent_tol = 1e-10;
  int max_newton_iters = 200;

  void validate() const {
    if (steps_per_unit_time < 1) throw ConfigError("steps_per_unit_time must be >= 1");
    if (!(resolvent_tol > 0.0)) throw ConfigError("resolvent_tol must be positive");
    if (max_newton_iters < 1) throw ConfigError("max_newton_iters must be >= 1");
  }
};

// number of implicit-Euler substeps used for a flow of duration t
int evolve_step_count(double t, const EvolveConfig& cfg);

// T(t) v by the exponential formula: the n-fold resolvent iterate
// (I + (t/n) A)^{-n} v with n = max(1, ceil(t * steps_per_unit_time)).
// evolve(op, v, 0, cfg) returns v bit-exactly.
StateField evolve(const AccretiveOperator& op, const StateField& v, double t,
                  const EvolveConfig& cfg, EvolveStats* acc = nullptr);

// direct discrete generator action (difference quotients only appear in tests)
StateField generator_apply(const AccretiveOperator& op, const StateField& u);

// || T(s+t)v - T(t)T(s)v ||_1 at the configured step resolution
double semigroup_defect(const AccretiveOperator& op, const StateField& v, double s, double t,
                        const EvolveConfig& cfg);

// Composite-midpoint quadrature of tau -> <psi, A u(tau)> over [0, length]
// along the implicit-Euler chain: one half-step resolvent to the first panel
// midpoint, then full steps between midpoints, then a half-step to the
// endpoint. Uses exactly n+1 resolvent calls, the same count as evolve plus
// the endpoint landing.
//
// The chain telescopes exactly, so the defect of the integral identity
//   integral + <psi, end_state - start>  =  (lam/2)(g(m_1) - g(end)) + solver
// with g(u) = <psi, A u>; endpoint_budget bounds that first term from the
// computed nodes and solver_calls feeds the residual slack budget.
struct PairingIntegral {
  double value = 0.0;
  double endpoint_budget = 0.0;
  StateField end_state;
  EvolveStats solver;
};

PairingIntegral integrate_generator_pairing(const AccretiveOperator& op, const StateField& start,
                                            double length, const TestField& psi,
                                            const EvolveConfig& cfg);

}  // namespace cadflow

#endif
