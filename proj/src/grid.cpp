#include "cadflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cadflow {

double StateField::norm_l1() const {
  double s = 0.0;
  for (double v : values) s += std::abs(v);
  return grid.cell_volume() * s;
}

double StateField::norm_l2() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(grid.cell_volume() * s);
}

double StateField::norm_linf() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double StateField::norm_lq(double q) const {
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v), q);
  return std::pow(grid.cell_volume() * s, 1.0 / q);
}

double StateField::mean() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double StateField::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return grid.cell_volume() * s;
}

bool StateField::all_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

StateField make_field(const GridDomain& grid, double fill) {
  return StateField{grid, std::vector<double>(static_cast<std::size_t>(grid.cell_count()), fill)};
}

StateField make_field(const GridDomain& grid, std::vector<double> values) {
  if (static_cast<int>(values.size()) != grid.cell_count())
    throw DomainError("field value count does not match the grid");
  return StateField{grid, std::move(values)};
}

StateField add(const StateField& a, const StateField& b) {
  require_same_grid(a.grid, b.grid, "add");
  StateField out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += b.values[i];
  return out;
}

StateField sub(const StateField& a, const StateField& b) {
  require_same_grid(a.grid, b.grid, "sub");
  StateField out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= b.values[i];
  return out;
}

StateField scale(const StateField& a, double c) {
  StateField out = a;
  for (double& v : out.values) v *= c;
  return out;
}

void axpy(double a, const StateField& x, StateField& y) {
  require_same_grid(x.grid, y.grid, "axpy");
  for (std::size_t i = 0; i < y.values.size(); ++i) y.values[i] += a * x.values[i];
}

double dist_l1(const StateField& a, const StateField& b) {
  require_same_grid(a.grid, b.grid, "dist_l1");
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += std::abs(a.values[i] - b.values[i]);
  return a.grid.cell_volume() * s;
}

double dist_linf(const StateField& a, const StateField& b) {
  require_same_grid(a.grid, b.grid, "dist_linf");
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

void require_same_grid(const GridDomain& a, const GridDomain& b, const char* where) {
  if (!(a == b)) throw DomainError(std::string("grid mismatch in ") + where);
}

TestField make_test_field(StateField f) {
  bool one = true;
  for (double v : f.values)
    if (v != 1.0) {
      one = false;
      break;
    }
  return TestField{std::move(f), one};
}

double pairing(const TestField& psi, const StateField& v) {
  require_same_grid(psi.field.grid, v.grid, "pairing");
  double s = 0.0;
  for (std::size_t i = 0; i < v.values.size(); ++i) s += psi.field.values[i] * v.values[i];
  return v.grid.cell_volume() * s;
}

}  // namespace cadflow
