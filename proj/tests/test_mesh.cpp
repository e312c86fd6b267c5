#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "greencolloc/mesh.hpp"

using namespace greencolloc;

namespace {

// Independent Newton-table recursion for distinct points.
double dd_oracle(std::vector<double> xs, std::vector<double> ys) {
  for (std::size_t level = 1; level < xs.size(); ++level) {
    for (std::size_t i = 0; i + level < xs.size(); ++i) {
      ys[i] = (ys[i + 1] - ys[i]) / (xs[i + level] - xs[i]);
    }
  }
  return ys[0];
}

std::vector<ConfluentPoint> distinct_points(const std::vector<double>& xs,
                                            double (*f)(double)) {
  std::vector<ConfluentPoint> pts;
  for (double x : xs) pts.push_back({x, f(x), std::nullopt});
  return pts;
}

}  // namespace

TEST_CASE("uniform mesh breakpoints") {
  UniformMesh m = make_mesh(4);
  REQUIRE(m.breakpoints.size() == 5);
  const double expected[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (int j = 0; j <= 4; ++j) {
    CHECK(m.breakpoints[j] == doctest::Approx(expected[j]).epsilon(1e-15));
  }
}

TEST_CASE("single-interval mesh") {
  UniformMesh m = make_mesh(1);
  CHECK(m.h == 1.0);
  CHECK(m.breakpoints == std::vector<double>{0.0, 1.0});
}

TEST_CASE("n = 3 mesh width and interior breakpoint") {
  UniformMesh m = make_mesh(3);
  CHECK(m.h == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(m.breakpoints[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("zero subintervals rejected") {
  CHECK_THROWS(make_mesh(0));
  CHECK_THROWS(make_mesh(-2));
}

TEST_CASE("default r = 1 nodes on the first subinterval") {
  CollocationGrid grid(make_mesh(2), 1);
  CHECK(grid.node(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(grid.node(0, 1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(grid.node(0, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(grid.dimension() == 6);
}

TEST_CASE("single-node layout with offset 1/3") {
  CollocationGrid grid(make_mesh(2), 0, std::vector<double>{1.0 / 3.0});
  CHECK(grid.node(0, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(grid.node(1, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("r = 2 defaults on a single interval") {
  CollocationGrid grid(make_mesh(1), 2);
  const double expected[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (int k = 0; k < 5; ++k) {
    CHECK(grid.node(0, k) == doctest::Approx(expected[k]).epsilon(1e-15));
  }
}

TEST_CASE("r = 0 defaults to the midpoint") {
  CollocationGrid grid(make_mesh(4), 0);
  CHECK(grid.offsets() == std::vector<double>{0.5});
  CHECK(grid.node(2, 0) == doctest::Approx(0.625).epsilon(1e-15));
}

TEST_CASE("invalid offsets rejected") {
  CHECK_THROWS(CollocationGrid(make_mesh(2), 1,
                               std::vector<double>{0.0, 0.5}));  // count
  CHECK_THROWS(CollocationGrid(make_mesh(2), 0,
                               std::vector<double>{1.5}));  // range
  CHECK_THROWS(CollocationGrid(make_mesh(2), 1,
                               std::vector<double>{0.0, 0.5, 0.5}));  // dup
}

TEST_CASE("cell lookup uses the left-limit convention") {
  CollocationGrid grid(make_mesh(4), 1);
  CHECK(grid.cell_of(0.0) == 0);
  CHECK(grid.cell_of(0.25) == 0);
  CHECK(grid.cell_of(0.2500001) == 1);
  CHECK(grid.cell_of(1.0) == 3);
}

TEST_CASE("second divided difference of t^2 is 1") {
  auto pts = distinct_points({0.0, 1.0, 2.0}, [](double t) { return t * t; });
  CHECK(divided_difference(pts) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("differences of constants vanish") {
  auto pts =
      distinct_points({0.1, 0.4, 0.9, 1.0}, [](double) { return 7.5; });
  CHECK(divided_difference(pts) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("repeated-node difference equals the derivative") {
  // [1,1]x = x'(1) = 3 for x = t^3.
  std::vector<ConfluentPoint> pts = {{1.0, 1.0, std::nullopt},
                                     {1.0, 1.0, 3.0}};
  CHECK(divided_difference(pts) == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("matches the brute-force Newton table for exp") {
  std::vector<double> xs = {0.0, 0.5, 1.0};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(std::exp(x));
  auto pts = distinct_points(xs, [](double t) { return std::exp(t); });
  CHECK(divided_difference(pts) ==
        doctest::Approx(dd_oracle(xs, ys)).epsilon(1e-13));
}

TEST_CASE("value is invariant under permutations of distinct points") {
  std::mt19937_64 rng(7);
  auto uniform = [&rng] { return (rng() >> 11) * 0x1.0p-53; };
  std::vector<double> xs = {0.05, 0.3, 0.55, 0.8, 0.95};
  auto f = [](double t) { return std::sin(3.0 * t) + t * t; };
  std::vector<ConfluentPoint> pts;
  for (double x : xs) pts.push_back({x, f(x), std::nullopt});
  const double reference = divided_difference(pts);
  for (int trial = 0; trial < 3; ++trial) {
    for (std::size_t i = pts.size(); i > 1; --i) {
      std::swap(pts[i - 1],
                pts[static_cast<std::size_t>(uniform() * i)]);
    }
    CHECK(divided_difference(pts) ==
          doctest::Approx(reference).epsilon(1e-10));
  }
}

TEST_CASE("confluent difference is the limit of coalescing points") {
  auto f = [](double t) { return std::exp(2.0 * t); };
  auto fp = [](double t) { return 2.0 * std::exp(2.0 * t); };
  const double a = 0.4;
  std::vector<ConfluentPoint> confluent = {
      {0.1, f(0.1), std::nullopt},
      {a, f(a), std::nullopt},
      {a, f(a), fp(a)},
      {0.9, f(0.9), std::nullopt}};
  const double exact = divided_difference(confluent);
  auto with_eps = [&](double eps) {
    std::vector<ConfluentPoint> pts = {{0.1, f(0.1), std::nullopt},
                                       {a, f(a), std::nullopt},
                                       {a + eps, f(a + eps), std::nullopt},
                                       {0.9, f(0.9), std::nullopt}};
    return std::abs(divided_difference(pts) - exact);
  };
  const double err5 = with_eps(1e-5);
  const double err6 = with_eps(1e-6);
  CHECK(err6 < err5);
  CHECK(err6 < 1e-4);
}

TEST_CASE("repeated point without derivative data rejected") {
  std::vector<ConfluentPoint> pts = {{1.0, 1.0, std::nullopt},
                                     {1.0, 1.0, std::nullopt}};
  CHECK_THROWS(divided_difference(pts));
}

TEST_CASE("non-adjacent repeats rejected") {
  std::vector<ConfluentPoint> pts = {{1.0, 1.0, std::nullopt},
                                     {2.0, 4.0, std::nullopt},
                                     {1.0, 1.0, 2.0}};
  CHECK_THROWS(divided_difference(pts));
}

TEST_CASE("linear functions are reproduced exactly") {
  CollocationGrid grid(make_mesh(3), 1);
  PiecewisePolynomial p{grid, {}};
  for (double tau : grid.nodes()) p.values.push_back(tau);
  CHECK(pp_eval(p, 0.3) == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("constant nodal values give a constant function") {
  CollocationGrid grid(make_mesh(4), 2);
  PiecewisePolynomial p{grid, std::vector<double>(grid.dimension(), 1.0)};
  for (int i = 0; i <= 20; ++i) {
    CHECK(pp_eval(p, i / 20.0) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("matches the explicit 3-point Lagrange formula") {
  CollocationGrid grid(make_mesh(2), 1);
  auto f = [](double t) { return t * t * t; };
  PiecewisePolynomial p{grid, {}};
  for (double tau : grid.nodes()) p.values.push_back(f(tau));
  const double t = 0.1;
  // Direct Lagrange evaluation through {0, 0.25, 0.5}.
  const double x0 = 0.0, x1 = 0.25, x2 = 0.5;
  const double oracle =
      f(x0) * (t - x1) * (t - x2) / ((x0 - x1) * (x0 - x2)) +
      f(x1) * (t - x0) * (t - x2) / ((x1 - x0) * (x1 - x2)) +
      f(x2) * (t - x0) * (t - x1) / ((x2 - x0) * (x2 - x1));
  CHECK(pp_eval(p, t) == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("evaluation outside the unit interval rejected") {
  CollocationGrid grid(make_mesh(2), 0);
  PiecewisePolynomial p{grid, {1.0, 2.0}};
  CHECK_THROWS(pp_eval(p, -0.01));
  CHECK_THROWS(pp_eval(p, 1.01));
}

TEST_CASE("local Lagrange basis cardinality") {
  // Cell 0 is the one cell all of whose nodes evaluate into it under
  // the left-limit convention (its right endpoint node included).
  CollocationGrid grid(make_mesh(3), 2);
  for (int k = 0; k < grid.nodes_per_cell(); ++k) {
    PiecewisePolynomial p{grid,
                          std::vector<double>(grid.dimension(), 0.0)};
    p.values[grid.flatten(0, k)] = 1.0;
    for (int m = 0; m < grid.nodes_per_cell(); ++m) {
      const double expected = m == k ? 1.0 : 0.0;
      CHECK(std::abs(pp_eval(p, grid.node(0, m)) - expected) <= 1e-13);
    }
  }
}

TEST_CASE("global polynomials of degree <= 2r are exact") {
  for (int r : {0, 1, 2}) {
    CollocationGrid grid(make_mesh(4), r);
    auto q = [r](double t) {
      double value = 0.0, power = 1.0;
      for (int k = 0; k <= 2 * r; ++k) {
        value += (k + 1) * power;
        power *= t;
      }
      return value;
    };
    PiecewisePolynomial p{grid, {}};
    for (double tau : grid.nodes()) p.values.push_back(q(tau));
    for (int i = 0; i <= 100; ++i) {
      const double t = i / 100.0;
      CHECK(std::abs(pp_eval(p, t) - q(t)) <= 1e-12);
    }
  }
}
