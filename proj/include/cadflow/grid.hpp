#ifndef CADFLOW_GRID_HPP
#define CADFLOW_GRID_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "cadflow/errors.hpp"

namespace cadflow {

// Rectangular cell grid standing in for the bounded domain S. Cells are
// squares (2D) or intervals (1D) of edge length h; the Lebesgue measure of a
// cell is h^dim.
struct GridDomain {
  int dim = 1;     // 1 or 2
  int nx = 2;      // cells along x
  int ny = 1;      // cells along y (always 1 in 1D)
  double h = 1.0;  // cell edge length

  int cell_count() const { return nx * ny; }
  double cell_volume() const { return dim == 1 ? h : h * h; }
  double measure() const { return cell_volume() * cell_count(); }
  int index(int ix, int iy) const { return iy * nx + ix; }

  // cell centers, used by the named field generators
  double x_center(int ix) const { return (ix + 0.5) * h; }
  double y_center(int iy) const { return (iy + 0.5) * h; }

  bool operator==(const GridDomain&) const = default;

  void validate() const {
    if (dim != 1 && dim != 2) throw ConfigError("grid dim must be 1 or 2");
    if (nx < 2) throw ConfigError("grid needs at least 2 cells per axis");
    if (dim == 2 && ny < 2) throw ConfigError("grid needs at least 2 cells per axis");
    if (dim == 1 && ny != 1) throw ConfigError("1D grid must have ny == 1");
    if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("cell size h must be positive");
  }
};

inline GridDomain make_grid_1d(int nx, double h) {
  GridDomain g{1, nx, 1, h};
  g.validate();
  return g;
}

inline GridDomain make_grid_2d(int nx, int ny, double h) {
  GridDomain g{2, nx, ny, h};
  g.validate();
  return g;
}

// One value per cell; a discrete element of L^1(S).
struct StateField {
  GridDomain grid;
  std::vector<double> values;

  double norm_l1() const;
  double norm_l2() const;
  double norm_linf() const;
  double norm_lq(double q) const;  // finite q >= 1
  double mean() const;
  double mass() const;  // h^dim * sum u_i
  bool all_finite() const;
};

StateField make_field(const GridDomain& grid, double fill = 0.0);
StateField make_field(const GridDomain& grid, std::vector<double> values);

StateField add(const StateField& a, const StateField& b);
StateField sub(const StateField& a, const StateField& b);
StateField scale(const StateField& a, double c);
void axpy(double a, const StateField& x, StateField& y);  // y += a*x
double dist_l1(const StateField& a, const StateField& b);
double dist_linf(const StateField& a, const StateField& b);

void require_same_grid(const GridDomain& a, const GridDomain& b, const char* where);

// Discrete test functional; the pairing <psi, v> = h^dim * sum psi_i v_i is
// the L^infty / L^1 duality on the grid.
struct TestField {
  StateField field;
  bool constant_one = false;
};

TestField make_test_field(StateField f);
double pairing(const TestField& psi, const StateField& v);

}  // namespace cadflow

#endif
