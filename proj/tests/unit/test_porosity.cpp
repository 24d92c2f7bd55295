#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/instances.hpp"
#include "fuplab/porosity.hpp"

using namespace fuplab;
using fuplab::testing::lattice_oracle;
using fuplab::testing::lattice_set;

TEST_CASE("interval sets merge and measure") {
  const IntervalSet s = IntervalSet::from_intervals({{0.5, 0.7}, {0.0, 0.2}, {0.1, 0.3}, {0.7, 0.8}});
  REQUIRE(s.size() == 2u);
  CHECK(s.measure() == doctest::Approx(0.6));
  CHECK(s.contains(0.75));
  CHECK_FALSE(s.contains(0.4));
  CHECK(IntervalSet::middle_thirds(4).measure() == doctest::Approx(std::pow(2.0 / 3.0, 4)));
  CHECK(IntervalSet::middle_thirds(4).size() == 16u);
}

TEST_CASE("fatten examples") {
  CHECK(IntervalSet().fattened(0.1).empty());
  const IntervalSet p = IntervalSet::from_intervals({{0.0, 0.0}}).fattened(0.1);
  REQUIRE(p.size() == 1u);
  CHECK(p.intervals()[0].left == doctest::Approx(-0.1));
  CHECK(p.intervals()[0].right == doctest::Approx(0.1));
}

TEST_CASE("trivial porosity cases") {
  CHECK(is_porous(IntervalSet(), 0.99, {0.01, 1.0}));
  const auto full = IntervalSet::from_intervals({{0.0, 1.0}});
  const PorosityCheck c = check_porosity(full, 0.1, {0.1, 0.5});
  CHECK_FALSE(c.porous);
  REQUIRE(c.witness.has_value());
  CHECK(c.witness->left >= 0.0);
  CHECK(c.witness->right <= 1.0);
  CHECK(porosity_profile(full, {0.25, 0.5})[0].nu_star == doctest::Approx(0.0).epsilon(1e-4));
  CHECK(porosity_profile(IntervalSet(), {0.5})[0].nu_star == doctest::Approx(1 - 1e-4));
  CHECK_THROWS_AS(check_porosity(full, 0.1, {0.5, 0.1}), InputError);
}

TEST_CASE("middle-thirds Cantor set: one fifth once intervals may overhang") {
  // inside the hull the worst ratio is 1/3; I = [-1/9, 4/9] sees three gaps of 1/9
  for (int k = 3; k <= 7; ++k) {
    const IntervalSet c = IntervalSet::middle_thirds(k);
    const ScaleWindow w{std::pow(3.0, 1 - k), 1.0};
    CHECK(is_porous(c, 0.2 - 1e-9, w));
    CHECK(porosity_report(c, w).nu_star == doctest::Approx(0.2).epsilon(0).scale(1).epsilon(1e-4));
    CHECK(largest_gap_in(c, {-1.0 / 9, 4.0 / 9}) == doctest::Approx(1.0 / 9));
    // restricted to the hull, scales 3^{-j}: the oracle sees 1/3
    const Interval hull = c.hull();
    double inside = 1.0;
    for (int j = 0; j < k; ++j) {
      const double s = std::pow(3.0, -j);
      for (int a = 0; a <= 729; ++a) {
        const double left = hull.left + (hull.length() - s) * a / 729.0;
        inside = std::min(inside, largest_gap_in(c, {left, left + s}) / s);
      }
    }
    CHECK(inside == doctest::Approx(1.0 / 3.0));
  }
}

TEST_CASE("exact checker agrees with the brute-force oracle") {
  std::mt19937_64 rng(17);
  const double delta = 1.0 / 256;
  for (int k = 0; k < 20; ++k) {
    const IntervalSet s = lattice_set(rng, delta);
    std::vector<double> scales;
    for (int j = -2; j <= 10; j += 3) scales.push_back(std::ldexp(1.0, -j));
    const auto prof = porosity_profile(s, scales);
    for (std::size_t i = 0; i < scales.size(); ++i) {
      const double oracle = std::min(lattice_oracle(s, scales[i], delta), 1.0 - 1e-4);
      CHECK(prof[i].nu_star == doctest::Approx(oracle).epsilon(0).scale(1).epsilon(2e-4));
    }
  }
}

TEST_CASE("scaling covariance") {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 10; ++k) {
    const IntervalSet s = lattice_set(rng, 1.0 / 128);
    const ScaleWindow w{0.01, 0.4};
    const double nu = porosity_report(s, w).nu_star;
    for (double c : {1.0 / 3.0, 2.0, 7.0}) {
      const double nc = porosity_report(s.scaled(c), {c * w.lo, c * w.hi}).nu_star;
      CHECK(nc == doctest::Approx(nu).epsilon(0).scale(1).epsilon(2e-4));
    }
  }
}

TEST_CASE("fattening never increases porosity") {
  std::mt19937_64 rng(6);
  for (int k = 0; k < 10; ++k) {
    const IntervalSet s = lattice_set(rng, 1.0 / 128);
    const ScaleWindow w{0.02, 0.5};
    CHECK(porosity_report(s.fattened(0.003), w).nu_star <= porosity_report(s, w).nu_star + 1e-4);
  }
}

TEST_CASE("neighbourhood and image lemmas") {
  std::mt19937_64 rng(9);
  int nbhd = 0, map = 0;
  for (int k = 0; k < 20; ++k) {
    const auto a = fuplab::testing::porous_nbhd_case(rng, 1.0 / 512);
    if (a.applicable) {
      ++nbhd;
      CHECK(a.holds);
    }
    const auto b = fuplab::testing::porous_map_case(rng, 1.0 / 512);
    if (b.applicable) {
      ++map;
      CHECK(b.holds);
    }
  }
  CHECK(nbhd > 5);
  CHECK(map > 5);
}

TEST_CASE("map image examples") {
  const IntervalSet s = IntervalSet::from_intervals({{0.0, 0.1}, {0.4, 0.5}});
  const MonotoneMap id{[](double x) { return x; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
  const IntervalSet a = map_image(s, id);
  CHECK(a.intervals()[1].left == 0.4);
  const MonotoneMap aff{[](double x) { return 2 * x + 1; }, [](double) { return 2.0; }, [](double) { return 0.0; }};
  const IntervalSet b = map_image(s, aff);
  CHECK(b.intervals()[0].left == doctest::Approx(1.0));
  CHECK(b.intervals()[1].right == doctest::Approx(2.0));
  const MonotoneMap fold{[](double x) { return x * x; }, [](double x) { return 2 * x; }, [](double) { return 2.0; }};
  CHECK_THROWS_AS(map_image(IntervalSet::from_intervals({{-0.5, 0.5}}), fold), InputError);
}

TEST_CASE("dynamical traces") {
  const AnosovMapSpec spec = AnosovMapSpec::cat(0.0);
  Partition::Options o;
  o.hole_radius = 0.15;
  const Partition part(o);
  TorusLine line;
  line.base = {0.05, 0.1};
  line.direction = unstable_direction(spec, line.base).direction;
  const IntervalSet full = dynamical_trace(spec, part, Word{}, line, 4096);
  REQUIRE(full.size() == 1u);
  CHECK(full.measure() == doctest::Approx(1.0));

  TorusLine in_hole;
  in_hole.base = {0.5, 0.5};
  in_hole.length = 0.05;
  CHECK(dynamical_trace(spec, part, Word{Alphabet::Coarse, {kStar}, Orientation::Future}, in_hole, 4096).empty());

  const int n = 6;
  const Word w{Alphabet::Coarse, std::vector<int>(n, kStar), Orientation::Future};
  const IntervalSet t = dynamical_trace(spec, part, w, line, 1 << 14);
  const double lambda = (3.0 + std::sqrt(5.0)) / 2.0;
  CHECK(porosity_report(t, {16.0 * std::pow(lambda, -n), 1.0}).nu_star > 0.0);
}

TEST_CASE("density in the unstable direction") {
  const AnosovMapSpec spec = AnosovMapSpec::cat(0.0);
  const Grid2 g{128};
  const Mask all{g, std::vector<std::uint8_t>(g.size(), 1)};
  const Mask none{g, std::vector<std::uint8_t>(g.size(), 0)};
  CHECK(density_check(spec, all, 3.0, 0.1, Bundle::Unstable, 8, 512));
  CHECK_FALSE(density_check(spec, none, 3.0, 0.1, Bundle::Unstable, 8, 512));
  Partition::Options o;
  o.hole_radius = 0.15;
  const Partition part(o);
  Mask out{g, std::vector<std::uint8_t>(g.size())};
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) out.cells[g.index(i, j)] = part.contains(Alphabet::Coarse, kStar, g.point(i, j));
  CHECK(density_check(spec, out, 3.0, 0.1, Bundle::Unstable, 8, 512));
}
