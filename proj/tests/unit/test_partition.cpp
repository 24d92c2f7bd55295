#include <doctest.h>

#include <random>

#include "fuplab/partition.hpp"

using namespace fuplab;

TEST_CASE("ball bump profile") {
  BallBump b;
  b.center = {0.5, 0.5};
  b.radius = 0.2;
  b.width = 0.1;
  CHECK(b(0.5, 0.5) == 1.0);
  CHECK(b(0.5 + 0.14, 0.5) == 1.0);
  CHECK(b(0.5 + 0.26, 0.5) == 0.0);
  const double mid = b(0.5 + 0.2, 0.5);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  CHECK(b.in_support({0.5 + 0.24, 0.5}));
  CHECK_FALSE(b.in_support({0.5 + 0.251, 0.5}));
  // wraps across the seam
  BallBump edge = b;
  edge.center = {0.0, 0.0};
  CHECK(edge(0.98, 0.99) == 1.0);
}

TEST_CASE("coarse and refined letters form partitions of unity") {
  const Partition part;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    const double x = u(rng), xi = u(rng);
    CHECK(part.a1(x, xi) + part.a_star(x, xi) == doctest::Approx(1.0));
    double s = 0.0;
    for (int l : part.letters(Alphabet::Refined)) {
      const double v = part.symbol(Alphabet::Refined, l, x, xi);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0 + 1e-14);
      // membership is geometric; the symbol may underflow to 0 just inside the support
      if (v > 0) CHECK(part.contains(Alphabet::Refined, l, {x, xi}));
      s += v;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("refined letters dominate the star letter") {
  const Partition part;
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    const TorusPoint p{u(rng), u(rng)};
    for (int l = 2; l <= part.refined_size(); ++l)
      if (part.contains(Alphabet::Refined, l, p)) CHECK(part.contains(Alphabet::Coarse, kStar, p));
  }
}

TEST_CASE("bad letters are rejected") {
  const Partition part;
  CHECK_THROWS_AS(part.check_letter(Alphabet::Coarse, 2), InputError);
  CHECK_THROWS_AS(part.check_letter(Alphabet::Refined, part.refined_size() + 1), InputError);
  CHECK_NOTHROW(part.check_letter(Alphabet::Refined, 1));
}

TEST_CASE("grid indexing") {
  const Grid2 g{4};
  CHECK(g.point(0, 0).x == doctest::Approx(0.125));
  CHECK(g.index(1, 2) == 9u);
  Mask m{g, std::vector<std::uint8_t>(16, 0)};
  m.cells[g.index(3, 1)] = 1;
  CHECK(m.contains({0.9, 0.3}));
  CHECK(m.contains({-0.1, 0.3}));
  CHECK(m.area() == doctest::Approx(1.0 / 16));
}
