#include "cadflow/semigroup.hpp"

#include <cmath>

namespace cadflow {

int evolve_step_count(double t, const EvolveConfig& cfg) {
  if (t <= 0.0) return 0;
  double raw = std::ceil(t * static_cast<double>(cfg.steps_per_unit_time));
  return raw < 1.0 ? 1 : static_cast<int>(raw);
}

namespace {

StateField resolvent_tracked(const AccretiveOperator& op, double lam, const StateField& f,
                             const EvolveConfig& cfg, EvolveStats* acc) {
  ResolventStats stats;
  StateField u = op.resolvent(lam, f, cfg.resolvent_tol, cfg.max_newton_iters,
                              acc ? &stats : nullptr);
  if (acc) acc->absorb(stats);
  return u;
}

}  // namespace

StateField evolve(const AccretiveOperator& op, const StateField& v, double t,
                  const EvolveConfig& cfg, EvolveStats* acc) {
  cfg.validate();
  require_same_grid(v.grid, op.grid(), "evolve");
  if (t < 0.0) throw DomainError("evolve needs t >= 0");
  if (t == 0.0) return v;

  const int n = evolve_step_count(t, cfg);
  const double lam = t / n;
  StateField u = v;
  for (int k = 0; k < n; ++k) u = resolvent_tracked(op, lam, u, cfg, acc);
  return u;
}

StateField generator_apply(const AccretiveOperator& op, const StateField& u) {
  require_same_grid(u.grid, op.grid(), "generator_apply");
  return op.apply(u);
}

double semigroup_defect(const AccretiveOperator& op, const StateField& v, double s, double t,
                        const EvolveConfig& cfg) {
  if (s < 0.0 || t < 0.0) throw DomainError("semigroup_defect needs s, t >= 0");
  StateField direct = evolve(op, v, s + t, cfg);
  StateField chained = evolve(op, evolve(op, v, s, cfg), t, cfg);
  return dist_l1(direct, chained);
}

PairingIntegral integrate_generator_pairing(const AccretiveOperator& op, const StateField& start,
                                            double length, const TestField& psi,
                                            const EvolveConfig& cfg) {
  cfg.validate();
  require_same_grid(start.grid, op.grid(), "integrate_generator_pairing");
  if (length < 0.0) throw DomainError("integration length must be >= 0");

  PairingIntegral out;
  out.end_state = start;
  if (length == 0.0) return out;

  const int n = evolve_step_count(length, cfg);
  const double lam = length / n;

  // quadrature nodes sit at (j - 1/2) * lam, strictly inside the interval
  StateField node = resolvent_tracked(op, 0.5 * lam, start, cfg, &out.solver);
  double g_first = 0.0, sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double g = pairing(psi, op.apply(node));
    if (j == 0) g_first = g;
    sum += g;
    if (j + 1 < n) node = resolvent_tracked(op, lam, node, cfg, &out.solver);
  }
  out.end_state = resolvent_tracked(op, 0.5 * lam, node, cfg, &out.solver);

  const double g_end = pairing(psi, op.apply(out.end_state));
  out.value = lam * sum;
  out.endpoint_budget = 0.5 * lam * (std::abs(g_first) + std::abs(g_end));
  return out;
}

}  // namespace cadflow
