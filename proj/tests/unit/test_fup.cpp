#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/instances.hpp"
#include "fuplab/fup.hpp"

using namespace fuplab;

TEST_CASE("discrete semiclassical Fourier transform is unitary") {
  const SemiclassicalFourier f = semiclassical_ft(0.01, 0.5, 1024);
  const CMatrix d = f.dense();
  CHECK((d.adjoint() * d - CMatrix::Identity(1024, 1024)).norm() < 1e-10);
  CVector v = CVector::Random(1024);
  CHECK((f.apply(v) - d * v).norm() < 1e-10 * v.norm());
  CHECK((f.apply_inverse(f.apply(v)) - v).norm() < 1e-10 * v.norm());
  CHECK(f.dxi() == doctest::Approx(kTwoPi * 0.01 / (1024 * f.dx())));
}

TEST_CASE("Nyquist rule is enforced") {
  const int m = SemiclassicalFourier::nyquist_size(0.01, 1.0);
  CHECK(m >= 8 * 4 / (kTwoPi * 0.01));
  CHECK((m & (m - 1)) == 0);
  CHECK_THROWS(semiclassical_ft(0.01, 1.0, m / 4));
}

TEST_CASE("norm never exceeds one or the volume bound") {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 8; ++k) {
    const IntervalSet a = fuplab::testing::lattice_set(rng, 1.0 / 64, 4);
    const IntervalSet b = fuplab::testing::lattice_set(rng, 1.0 / 64, 4);
    const FupResult r = fup_norm(0.02, a, b);
    CHECK(r.norm <= std::min(1.0, r.volume_bound) + 1e-6);
    CHECK(r.volume_bound == doctest::Approx(std::sqrt(a.measure() * b.measure() / (kTwoPi * 0.02))));
  }
}

TEST_CASE("empty sets give zero and wide sets approach one") {
  const IntervalSet I = IntervalSet::from_intervals({{-1.0, 1.0}});
  CHECK(fup_norm(0.01, IntervalSet(), I).norm == 0.0);
  // both sides of width 2 at h = 0.01 leave almost nothing outside
  CHECK(fup_norm(0.01, I, I).norm > 0.99);
}

TEST_CASE("small-volume sets are bounded by the volume") {
  const IntervalSet a = IntervalSet::from_intervals({{0.0, 0.001}});
  const FupResult r = fup_norm(0.1, a, a);
  // for tiny sets the operator is nearly rank one with norm |a| / sqrt(2 pi h)
  CHECK(r.norm == doctest::Approx(r.volume_bound).epsilon(1e-3));
}

TEST_CASE("Gauss and grid discretisations agree") {
  const IntervalSet a = IntervalSet::from_intervals({{0.0, 0.3}, {0.6, 0.7}});
  const IntervalSet b = IntervalSet::from_intervals({{-0.2, 0.1}, {0.4, 0.5}});
  FupOptions g;
  FupOptions d;
  d.method = FupMethod::Grid;
  const double ng = fup_norm(0.02, a, b, g).norm;
  const double nd = fup_norm(0.02, a, b, d).norm;
  CHECK(ng == doctest::Approx(nd).epsilon(2e-2));
}

TEST_CASE("rescaling identity") {
  std::mt19937_64 rng(10);
  const GammaExponents g{1.0, 0.2, 0.9, 0.1};
  for (int k = 0; k < 3; ++k) {
    const IntervalSet om = fuplab::testing::lattice_set(rng, 1.0 / 64, 4);
    const IntervalSet op = fuplab::testing::lattice_set(rng, 1.0 / 64, 4);
    const double h = 0.01;
    const Rescaled r = window_rescale(om, op, h, g);
    CHECK(r.gamma == doctest::Approx(0.7));
    CHECK(r.h_tilde == doctest::Approx(std::pow(h, 0.7)));
    CHECK(std::abs(fup_norm(h, om, op).norm - fup_norm(r.h_tilde, r.omega_minus, r.omega_plus).norm) < 1e-6);
  }
  CHECK_THROWS_AS(window_rescale(IntervalSet(), IntervalSet(), 0.01, {0.5, 0.6, 0.9, 0.1}), InputError);
}

TEST_CASE("beta fit on synthetic data") {
  std::vector<double> hs, ns;
  for (int k = 1; k <= 6; ++k) hs.push_back(std::pow(3.0, -k)), ns.push_back(2.0 * std::pow(hs.back(), 0.25));
  const BetaFit f = fit_beta(hs, ns);
  CHECK(f.beta == doctest::Approx(0.25));
  CHECK(f.r2 == doctest::Approx(1.0));
}

TEST_CASE("smooth cutoff") {
  const IntervalSet om = IntervalSet::from_intervals({{0.0, 1.0}});
  const SmoothCutoff chi(om, 0.1);
  CHECK(chi(0.5) == 1.0);
  CHECK(chi(0.0) == 1.0);
  CHECK(chi(1.1) == 0.0);
  CHECK(chi(-0.12) == 0.0);
  const double mid = chi(1.05);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  const FupResult r = fup_norm_smoothed(0.05, chi, chi);
  CHECK(r.norm <= 1.0 + 1e-6);
  CHECK(r.norm >= fup_norm(0.05, om, om).norm - 1e-3);
}

TEST_CASE("beta reference underflows") {
  CHECK(beta_reference(1.0, 0.1) > 0.0);
  CHECK(beta_reference(0.1, 1.0) == 0.0);
}
