#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cadflow/plaplacian.hpp"
#include "cadflow/rng.hpp"

using namespace cadflow;

namespace {

StateField random_field(const GridDomain& g, Rng& rng, double lo = -1.0, double hi = 1.0) {
  StateField f = make_field(g);
  for (double& v : f.values) v = rng.uniform(lo, hi);
  return f;
}

PLaplaceOperator make_op_1d(int cells, double h, double p, double gamma = 1.0) {
  GridDomain g = make_grid_1d(cells, h);
  return PLaplaceOperator({p, g, uniform_weight(g, gamma)});
}

PLaplaceOperator make_op_2d(int nx, int ny, double h, double p, double gamma = 1.0) {
  GridDomain g = make_grid_2d(nx, ny, h);
  return PLaplaceOperator({p, g, uniform_weight(g, gamma)});
}

// scalar bisection for the two-cell resolvent: with u = (1-s, 1+s) the
// equation in cell 0 reads 1 - s - 4 s^2 = 0
double two_cell_root() {
  auto q = [](double s) { return 1.0 - s - 4.0 * s * s; };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (q(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("two-cell operator application matches the hand evaluation") {
  // 1D, 2 cells, h=1, gamma=1, p=3, u=(0,2): face difference 2, flux |2|*2=4
  auto op = make_op_1d(2, 1.0, 3.0);
  StateField u = make_field(op.grid(), {0.0, 2.0});
  StateField au = op.apply(u);
  CHECK(au.values[0] == -4.0);
  CHECK(au.values[1] == 4.0);
}

TEST_CASE("constants are annihilated exactly") {
  for (double p : {1.5, 3.0, 4.0}) {
    auto op = make_op_1d(16, 0.1, p);
    StateField c = make_field(op.grid(), 3.7);
    StateField ac = op.apply(c);
    for (double v : ac.values) CHECK(v == 0.0);
    CHECK(op.dirichlet_energy(c) == 0.0);
  }
}

TEST_CASE("operator output has zero total mass (Neumann telescoping)") {
  Rng rng(21);
  for (double p : {1.5, 3.0, 4.0}) {
    auto op1 = make_op_1d(64, 1.0 / 64, p);
    auto op2 = make_op_2d(8, 8, 0.125, p);
    for (int trial = 0; trial < 10; ++trial) {
      StateField u1 = random_field(op1.grid(), rng);
      StateField u2 = random_field(op2.grid(), rng);
      const double m1 = op1.apply(u1).mass();
      const double m2 = op2.apply(u2).mass();
      const double s1 = op1.apply(u1).norm_l1() + 1.0;
      const double s2 = op2.apply(u2).norm_l1() + 1.0;
      CHECK(std::abs(m1) <= 1e-12 * s1);
      CHECK(std::abs(m2) <= 1e-12 * s2);
    }
  }
}

TEST_CASE("weak pairing equals <phi, A u> exactly (summation by parts)") {
  Rng rng(33);
  for (double p : {1.5, 3.0, 4.0}) {
    auto op1 = make_op_1d(32, 1.0 / 32, p);
    auto op2 = make_op_2d(6, 5, 0.2, p);
    for (int trial = 0; trial < 10; ++trial) {
      for (const auto* op : {&op1, &op2}) {
        StateField u = random_field(op->grid(), rng);
        StateField phi = random_field(op->grid(), rng);
        const double weak = op->weak_pairing(u, phi);
        const double strong = pairing(make_test_field(phi), op->apply(u));
        CHECK(weak == doctest::Approx(strong).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("weak pairing vanishes for constant arguments") {
  auto op = make_op_1d(16, 0.0625, 3.0);
  Rng rng(5);
  StateField u = random_field(op.grid(), rng);
  StateField c = make_field(op.grid(), 2.0);
  CHECK(op.weak_pairing(u, c) == 0.0);
  CHECK(op.weak_pairing(c, u) == 0.0);
}

TEST_CASE("two-cell resolvent matches the bisection oracle") {
  // lambda=1, f=(0,2): u = (1-s, 1+s) with s the root of 1 - s - 4 s^2
  auto op = make_op_1d(2, 1.0, 3.0);
  StateField f = make_field(op.grid(), {0.0, 2.0});
  const double s = two_cell_root();
  ResolventStats stats;
  StateField u = op.resolvent(1.0, f, 1e-10, 200, &stats);
  CHECK(u.values[0] == doctest::Approx(1.0 - s).epsilon(1e-9));
  CHECK(u.values[1] == doctest::Approx(1.0 + s).epsilon(1e-9));
  CHECK(stats.final_residual <= 1e-10);
  CHECK(u.values[0] == doctest::Approx(0.6096).epsilon(1e-3));
  CHECK(u.values[1] == doctest::Approx(1.3904).epsilon(1e-3));
}

TEST_CASE("constant data is a fixed point of the resolvent, bit for bit") {
  for (double p : {1.5, 3.0, 4.0}) {
    auto op = make_op_1d(16, 0.0625, p);
    StateField f = make_field(op.grid(), -2.25);
    ResolventStats stats;
    StateField u = op.resolvent(0.7, f, 1e-12, 200, &stats);
    for (std::size_t i = 0; i < u.values.size(); ++i) CHECK(u.values[i] == f.values[i]);
    CHECK(stats.newton_iters == 0);
    CHECK(stats.final_residual == 0.0);
  }
}

TEST_CASE("resolvent is an L1 contraction") {
  Rng rng(77);
  for (double p : {1.5, 3.0, 4.0}) {
    auto op = make_op_1d(64, 1.0 / 64, p);
    for (double lam : {0.01, 0.1, 1.0}) {
      for (int trial = 0; trial < 50; ++trial) {
        StateField f = random_field(op.grid(), rng);
        StateField g = random_field(op.grid(), rng);
        StateField uf = op.resolvent(lam, f, 1e-10, 200, nullptr);
        StateField ug = op.resolvent(lam, g, 1e-10, 200, nullptr);
        CHECK(dist_l1(uf, ug) <= dist_l1(f, g) + 1e-8);
      }
    }
  }
}

TEST_CASE("resolvent preserves cellwise order") {
  Rng rng(101);
  for (double p : {1.5, 3.0}) {
    auto op = make_op_1d(32, 1.0 / 32, p);
    for (int trial = 0; trial < 20; ++trial) {
      StateField f = random_field(op.grid(), rng);
      StateField g = f;
      for (double& v : g.values) v += rng.uniform(0.0, 0.5);
      StateField uf = op.resolvent(0.25, f, 1e-10, 200, nullptr);
      StateField ug = op.resolvent(0.25, g, 1e-10, 200, nullptr);
      for (std::size_t i = 0; i < uf.values.size(); ++i)
        CHECK(uf.values[i] <= ug.values[i] + 1e-8);
    }
  }
}

TEST_CASE("resolvent output stays within the data bounds") {
  Rng rng(55);
  auto op = make_op_2d(8, 8, 0.125, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    StateField f = random_field(op.grid(), rng, -2.0, 3.0);
    StateField u = op.resolvent(0.5, f, 1e-10, 200, nullptr);
    double lo = f.values[0], hi = f.values[0];
    for (double v : f.values) lo = std::min(lo, v), hi = std::max(hi, v);
    for (double v : u.values) {
      CHECK(v >= lo - 1e-9);
      CHECK(v <= hi + 1e-9);
    }
  }
}

TEST_CASE("operator is positively homogeneous of degree p-1") {
  Rng rng(13);
  for (double p : {1.5, 3.0, 4.0}) {
    auto op = make_op_1d(32, 1.0 / 32, p);
    StateField u = random_field(op.grid(), rng);
    for (double c : {0.5, 2.0, 7.0}) {
      StateField lhs = op.apply(scale(u, c));
      StateField rhs = scale(op.apply(u), std::pow(c, p - 1.0));
      const double scale_ref = rhs.norm_linf() + 1e-300;
      CHECK(dist_linf(lhs, rhs) <= 1e-12 * scale_ref);
    }
  }
}

TEST_CASE("resolvent scaling law R_lam(c f) = c R_{lam c^{p-2}}(f)") {
  Rng rng(14);
  const double tol = 1e-11;
  for (double p : {1.5, 3.0, 4.0}) {
    auto op = make_op_1d(32, 1.0 / 32, p);
    StateField f = random_field(op.grid(), rng);
    for (double c : {0.5, 3.0}) {
      const double lam = 0.2;
      StateField lhs = op.resolvent(lam, scale(f, c), tol, 200, nullptr);
      StateField rhs = scale(op.resolvent(lam * std::pow(c, p - 2.0), f, tol, 200, nullptr), c);
      CHECK(dist_linf(lhs, rhs) <= 10.0 * tol * std::max(1.0, std::abs(c)));
    }
  }
}

TEST_CASE("dirichlet energy is p-homogeneous and vanishes on constants") {
  Rng rng(15);
  for (double p : {1.5, 3.0}) {
    auto op = make_op_1d(16, 0.0625, p);
    StateField u = random_field(op.grid(), rng);
    const double e = op.dirichlet_energy(u);
    CHECK(e > 0.0);
    for (double c : {0.5, 2.0})
      CHECK(op.dirichlet_energy(scale(u, c)) == doctest::Approx(std::pow(c, p) * e).epsilon(1e-12));
  }
}

TEST_CASE("harmonic face averaging matches the closed form") {
  GridDomain g = make_grid_1d(3, 0.5);
  WeightField w = weight_from_cells(g, {1.0, 2.0, 4.0});
  CHECK(w.faces.x[0] == doctest::Approx(2.0 * 1.0 * 2.0 / 3.0).epsilon(1e-15));
  CHECK(w.faces.x[1] == doctest::Approx(2.0 * 2.0 * 4.0 / 6.0).epsilon(1e-15));
  CHECK(w.gamma_min == doctest::Approx(4.0 / 3.0));
  CHECK(w.gamma_max == doctest::Approx(8.0 / 3.0));

  GridDomain g2 = make_grid_2d(2, 2, 1.0);
  WeightField w2 = weight_from_cells(g2, {1.0, 1.0, 3.0, 3.0});
  CHECK(w2.faces.y[0] == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("parallel kernels agree exactly with the serial reference") {
  Rng rng(91);
  for (double p : {1.5, 3.0, 4.0}) {
    auto op1 = make_op_1d(257, 1.0 / 257, p);
    auto op2 = make_op_2d(17, 23, 0.05, p);
    for (const auto* op : {&op1, &op2}) {
      StateField u = random_field(op->grid(), rng);
      StateField a = op->apply(u);
      StateField b = op->apply_serial(u);
      for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
    }
  }
  // the shifted-Laplacian matvec pair as well
  GridDomain g = make_grid_2d(9, 7, 0.1);
  kernels::FaceValues w = kernels::FaceValues::zeros(g);
  for (double& v : w.x) v = rng.uniform(0.5, 2.0);
  for (double& v : w.y) v = rng.uniform(0.5, 2.0);
  std::vector<double> x(static_cast<std::size_t>(g.cell_count()));
  for (double& v : x) v = rng.uniform(-1.0, 1.0);
  std::vector<double> out_par(x.size()), out_ser(x.size());
  kernels::shifted_laplacian_matvec(g, 0.3, w, x, out_par);
  kernels::shifted_laplacian_matvec_serial(g, 0.3, w, x, out_ser);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(out_par[i] == out_ser[i]);
}

TEST_CASE("p = 1.5 resolvent handles flattened data") {
  // plateaued data with a tiny ramp exercises the small-gradient regime where
  // the exact flux has unbounded slope
  auto op = make_op_1d(16, 0.0625, 1.5);
  StateField f = make_field(op.grid(), 1.0);
  f.values[7] += 1e-9;
  f.values[8] += 2e-9;
  ResolventStats stats;
  StateField u = op.resolvent(0.05, f, 1e-10, 200, &stats);
  CHECK(dist_linf(u, f) <= 1e-8);  // the state barely moves
}

TEST_CASE("domain and argument errors") {
  auto op = make_op_1d(8, 0.125, 3.0);
  auto other = make_grid_1d(9, 0.125);
  StateField wrong = make_field(other, 0.0);
  CHECK_THROWS_AS(op.apply(wrong), DomainError);
  StateField f = make_field(op.grid(), 1.0);
  CHECK_THROWS_AS(op.resolvent(0.0, f, 1e-10, 100, nullptr), DomainError);
  CHECK_THROWS_AS(op.resolvent(-1.0, f, 1e-10, 100, nullptr), DomainError);
  CHECK_THROWS_AS(op.resolvent(1.0, f, 0.0, 100, nullptr), DomainError);

  GridDomain g = make_grid_1d(8, 0.125);
  CHECK_THROWS_AS(PLaplaceOperator({2.0, g, uniform_weight(g, 1.0)}), ConfigError);
  CHECK_THROWS_AS(PLaplaceOperator({1.0, g, uniform_weight(g, 1.0)}), ConfigError);
  CHECK_THROWS_AS(PLaplaceOperator({0.5, g, uniform_weight(g, 1.0)}), ConfigError);
  CHECK_THROWS_AS(uniform_weight(g, 0.0), ConfigError);
  CHECK_THROWS_AS(uniform_weight(g, -1.0), ConfigError);
}

TEST_CASE("solver failure carries a residual trace") {
  auto op = make_op_1d(32, 1.0 / 32, 4.0);
  Rng rng(3);
  StateField f = random_field(op.grid(), rng);
  try {
    op.resolvent(1.0, f, 1e-10, 1, nullptr);  // one iteration cannot be enough
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.residual_trace().size() >= 1);
    CHECK(e.final_residual() > 1e-10);
  }
}
