#ifndef CADFLOW_PLAPLACIAN_HPP
#define CADFLOW_PLAPLACIAN_HPP

#include <vector>

#include "cadflow/grid.hpp"
#include "cadflow/kernels.hpp"
#include "cadflow/semigroup.hpp"

namespace cadflow {

// Positive weight gamma evaluated on the interior faces (the flux locations).
struct WeightField {
  kernels::FaceValues faces;
  double gamma_min = 1.0;
  double gamma_max = 1.0;

  void validate(const GridDomain& g) const;
};

WeightField uniform_weight(const GridDomain& g, double gamma);

// Cell-centered weights are averaged onto faces harmonically, which keeps the
// discrete integration-by-parts identity exact for the weighted fluxes.
WeightField weight_from_cells(const GridDomain& g, const std::vector<double>& cell_gamma);

struct PLaplaceParams {
  double p = 3.0;
  GridDomain grid;
  WeightField gamma;

  // the standing assumption: p in (1, inf) \ {2}
  void validate() const;
};

// Discrete weighted p-Laplacian with zero-flux (Neumann) boundary:
//   (A u)_i = -(1/h^dim) * sum over faces of cell i of
//             s_{i,f} * gamma_f |D_f u|^{p-2} D_f u * h^{dim-1}
// with D_f u the face-normal difference quotient and s the outward sign.
// A annihilates constants and conserves cell-sum mass exactly.
class PLaplaceOperator final : public AccretiveOperator {
 public:
  explicit PLaplaceOperator(PLaplaceParams params);

  const GridDomain& grid() const override { return params_.grid; }
  const PLaplaceParams& params() const { return params_; }

  StateField apply(const StateField& u) const override;
  StateField apply_serial(const StateField& u) const;  // reference path

  // discrete int gamma |grad u|^{p-2} grad u . grad phi ; equals
  // <phi, apply(u)> exactly (summation by parts)
  double weak_pairing(const StateField& u, const StateField& phi) const;

  // h^dim * sum_f gamma_f |D_f u|^p / p ; the Lyapunov functional of the flow
  double dirichlet_energy(const StateField& u) const;

  // Unique minimizer of  (1/2)||u - f||_2^2 + lambda * dirichlet_energy(u),
  // i.e. the solution of u + lambda A u = f, found by damped Newton with
  // Armijo backtracking and a Barzilai-Borwein fallback step. The Jacobian is
  // Huber-smoothed (eps = 1e-10); the residual uses the exact flux.
  StateField resolvent(double lambda, const StateField& f, double tol, int max_iters,
                       ResolventStats* stats) const override;
  using AccretiveOperator::resolvent;

 private:
  PLaplaceParams params_;
};

}  // namespace cadflow

#endif
