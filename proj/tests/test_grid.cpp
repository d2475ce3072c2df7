#include <doctest.h>

#include <stdexcept>

#include "effham/grid.hpp"

using namespace effham;

TEST_CASE("1D grid of four nodes") {
  const TorusGrid g = make_grid(1, 4);
  CHECK(g.N == 4);
  CHECK(g.h == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(g.points(0, 0) == doctest::Approx(0.25));
  CHECK(g.points(1, 0) == doctest::Approx(0.5));
  CHECK(g.points(2, 0) == doctest::Approx(0.75));
  CHECK(g.points(3, 0) == doctest::Approx(1.0));
}

TEST_CASE("2D 12x12 grid") {
  const TorusGrid g = make_grid(2, 12);
  CHECK(g.N == 144);
  CHECK(g.h == doctest::Approx(1.0 / 12).epsilon(1e-15));
  CHECK(g.h * g.n_per_dim == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("construction rejects bad arguments") {
  CHECK_THROWS_AS(make_grid(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(3, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 1), std::invalid_argument);
}

TEST_CASE("periodic wraparound in 1D") {
  const TorusGrid g = make_grid(1, 4);
  CHECK(neighbor(g, 3, 0, +1) == 0); // last node wraps to the first
  CHECK(neighbor(g, 0, 0, -1) == 3);
  const TorusGrid g2 = make_grid(1, 2);
  CHECK(neighbor(g2, 0, 0, +1) == 1);
  CHECK(neighbor(g2, 1, 0, +1) == 0);
}

TEST_CASE("periodic wraparound in 2D") {
  // 3x3 grid, row-major: node (r, c) has flat index 3r + c
  const TorusGrid g = make_grid(2, 3);
  CHECK(neighbor(g, 0, 1, -1) == 2); // (0,0) back along axis 1 -> (0,2)
  CHECK(neighbor(g, 0, 0, -1) == 6); // (0,0) back along axis 0 -> (2,0)
  CHECK_THROWS_AS(neighbor(g, 9, 0, +1), std::out_of_range);
  CHECK_THROWS_AS(neighbor(g, 0, 2, +1), std::out_of_range);
}

TEST_CASE("forward then backward is the identity on every node") {
  for (const TorusGrid& g : {make_grid(1, 5), make_grid(2, 4)}) {
    for (int i = 0; i < g.N; ++i)
      for (int a = 0; a < g.d; ++a) {
        CHECK(neighbor(g, neighbor(g, i, a, +1), a, -1) == i);
        CHECK(neighbor(g, neighbor(g, i, a, -1), a, +1) == i);
      }
  }
}

TEST_CASE("coordinate sums match the lattice") {
  // summing one coordinate over all nodes gives n^(d-1) * sum_j j*h
  const TorusGrid g = make_grid(2, 6);
  double expect = 0.0;
  for (int j = 1; j <= 6; ++j) expect += j * g.h;
  expect *= 6;
  for (int a = 0; a < 2; ++a)
    CHECK(g.points.col(a).sum() == doctest::Approx(expect).epsilon(1e-13));
}
