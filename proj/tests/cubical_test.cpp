#include <doctest.h>

#include <random>
#include <set>

#include "paintph/cubical.hpp"
#include "paintph/errors.hpp"
#include "support.hpp"

using namespace paintph;

TEST_CASE("binarize") {
  IntensityGrid g(2, 2);
  g << 100, 150, 200, 250;
  const BitGrid b = binarize(g, 150);
  CHECK(b(0, 0));
  CHECK(b(0, 1));
  CHECK_FALSE(b(1, 0));
  CHECK_FALSE(b(1, 1));
  CHECK(binarize(g, 255).all());
  CHECK_FALSE(binarize(g, 99).any());
  CHECK_THROWS_AS(binarize(g, -1), ContractViolation);
  CHECK_THROWS_AS(binarize(g, 256), ContractViolation);
}

TEST_CASE("binarize is nested in the threshold") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const IntensityGrid g = support::random_grid(rng);
    BitGrid prev = binarize(g, 0);
    for (int t = 1; t < 256; ++t) {
      const BitGrid cur = binarize(g, t);
      REQUIRE((prev <= cur).all());
      prev = cur;
    }
  }
}

TEST_CASE("filtration of a single pixel") {
  IntensityGrid g(1, 1);
  g << 42;
  const auto c = build_filtration(g);
  CHECK(c.num_vertices() == 1);
  CHECK(c.num_edges() == 0);
  CHECK(c.num_squares() == 0);
  CHECK(c.vertex_value(0) == 42);
}

TEST_CASE("filtration of a 2x2 grid") {
  IntensityGrid g(2, 2);
  g << 0, 1, 2, 3;
  const auto c = build_filtration(g);
  REQUIRE(c.num_vertices() == 4);
  REQUIRE(c.num_edges() == 4);
  REQUIRE(c.num_squares() == 1);
  for (Index v = 0; v < 4; ++v) CHECK(c.vertex_value(v) == v);

  auto edge_between = [&](Index u, Index v) {
    for (Index e = 0; e < c.num_edges(); ++e) {
      const auto ends = c.edge_vertices(e);
      if ((ends[0] == u && ends[1] == v) || (ends[0] == v && ends[1] == u)) return e;
    }
    FAIL("no edge");
    return Index{-1};
  };
  CHECK(c.edge_value(edge_between(0, 1)) == 1);
  CHECK(c.edge_value(edge_between(0, 2)) == 2);
  CHECK(c.edge_value(edge_between(1, 3)) == 3);
  CHECK(c.edge_value(edge_between(2, 3)) == 3);
  CHECK(c.square_value(0) == 3);
}

TEST_CASE("cell counts") {
  for (Index h = 1; h <= 5; ++h)
    for (Index w = 1; w <= 5; ++w) {
      IntensityGrid g = IntensityGrid::Zero(h, w);
      const auto c = build_filtration(g);
      CHECK(c.num_vertices() == h * w);
      CHECK(c.num_edges() == h * (w - 1) + (h - 1) * w);
      CHECK(c.num_squares() == (h - 1) * (w - 1));
      // The full grid is contractible.
      CHECK(c.num_vertices() - c.num_edges() + c.num_squares() == 1);
    }
  const auto c = build_filtration(IntensityGrid::Zero(2, 3));
  CHECK(c.num_vertices() == 6);
  CHECK(c.num_edges() == 7);
  CHECK(c.num_squares() == 2);
}

TEST_CASE("faces, values and ids") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const IntensityGrid g = support::random_grid(rng);
    const auto c = build_filtration(g);
    const Index w = g.cols();
    for (Index e = 0; e < c.num_edges(); ++e) {
      const auto [u, v] = c.edge_vertices(e);
      const Index ux = u % w, uy = u / w, vx = v % w, vy = v / w;
      REQUIRE(std::abs(ux - vx) + std::abs(uy - vy) == 1);
      REQUIRE(c.edge_value(e) == std::max(g(uy, ux), g(vy, vx)));
    }
    for (Index s = 0; s < c.num_squares(); ++s) {
      const auto corners = c.square_vertices(s);
      std::set<Index> from_edges;
      std::uint8_t top = 0;
      for (Index e : c.square_edges(s)) {
        for (Index v : c.edge_vertices(e)) from_edges.insert(v);
        REQUIRE(c.edge_value(e) <= c.square_value(s));
      }
      for (Index v : corners) top = std::max(top, c.vertex_value(v));
      REQUIRE(from_edges == std::set<Index>(corners.begin(), corners.end()));
      REQUIRE(c.square_value(s) == top);
    }
  }
}

TEST_CASE("cell ids depend only on the grid shape") {
  std::mt19937_64 rng(6);
  IntensityGrid a(5, 7), b(5, 7);
  for (Index i = 0; i < a.size(); ++i) {
    a.data()[i] = static_cast<std::uint8_t>(support::uniform(rng, 0, 255));
    b.data()[i] = static_cast<std::uint8_t>(support::uniform(rng, 0, 255));
  }
  const auto ca = build_filtration(a), cb = build_filtration(b);
  for (Index e = 0; e < ca.num_edges(); ++e) CHECK(ca.edge_vertices(e) == cb.edge_vertices(e));
  for (Index s = 0; s < ca.num_squares(); ++s) CHECK(ca.square_edges(s) == cb.square_edges(s));
}

TEST_CASE("sublevel vertices match the binarized image") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const IntensityGrid g = support::random_grid(rng);
    const int t = support::uniform(rng, 0, 255);
    const auto c = build_filtration(g);
    const BitGrid black = binarize(g, t);
    for (Index v = 0; v < c.num_vertices(); ++v)
      REQUIRE(c.in_sublevel(0, v, t) == black(v / g.cols(), v % g.cols()));
    // Edges and squares are present exactly when all their corners are.
    for (Index e = 0; e < c.num_edges(); ++e) {
      const auto [u, v] = c.edge_vertices(e);
      REQUIRE(c.in_sublevel(1, e, t) == (c.in_sublevel(0, u, t) && c.in_sublevel(0, v, t)));
    }
    for (Index s = 0; s < c.num_squares(); ++s) {
      bool all = true;
      for (Index v : c.square_vertices(s)) all = all && c.in_sublevel(0, v, t);
      REQUIRE(c.in_sublevel(2, s, t) == all);
    }
  }
}
