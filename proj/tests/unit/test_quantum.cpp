#include <doctest.h>

#include <cmath>
#include <random>

#include "fuplab/quantum.hpp"

using namespace fuplab;

namespace {

// Op(a) = sum over the band |k| <= N/2 - 1 of a^(k) T(k), coefficients by a direct
// DFT of the K x K samples at (s/K, r/K).
CMatrix weyl_by_translations(const Symbol& a, const HilbertSpace& space, int K) {
  const int N = space.N, band = N / 2 - 1;
  CMatrix op = CMatrix::Zero(N, N);
  for (int k1 = -band; k1 <= band; ++k1)
    for (int k2 = -band; k2 <= band; ++k2) {
      cdouble c = 0.0;
      for (int r = 0; r < K; ++r)
        for (int s = 0; s < K; ++s)
          c += a(double(s) / K, double(r) / K) * std::polar(1.0, -kTwoPi * (double(k1) * s + double(k2) * r) / K);
      op += (c / double(K * K)) * translation_operator(space, k1, k2);
    }
  return op;
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

Word random_word(std::mt19937_64& rng, int len, Orientation o) {
  Word w{Alphabet::Coarse, std::vector<int>(len), o};
  for (auto& l : w.letters) l = rng() % 2 ? 1 : kStar;
  return w;
}

CMatrix power(const Propagator& u, int t) { return u.apply_power(CMatrix::Identity(u.dimension(), u.dimension()), t); }

}  // namespace

TEST_CASE("odd dimensions are rejected with a suggestion") {
  CHECK_THROWS_WITH_AS(HilbertSpace::make(65), doctest::Contains("64"), InputError);
  CHECK(HilbertSpace::make(64).h() == doctest::Approx(1.0 / (kTwoPi * 64)));
}

TEST_CASE("translation operators obey the Heisenberg group law") {
  const HilbertSpace sp = HilbertSpace::make(8);
  for (int k1 = -2; k1 <= 2; ++k1)
    for (int k2 = -2; k2 <= 2; ++k2)
      for (int l1 : {-1, 3})
        for (int l2 : {2, -3}) {
          const CMatrix lhs = translation_operator(sp, k1, k2) * translation_operator(sp, l1, l2);
          const cdouble ph = std::polar(1.0, kPi * (double(l1) * k2 - double(k1) * l2) / 8);
          CHECK(max_abs(lhs - ph * translation_operator(sp, k1 + l1, k2 + l2)) < 1e-12);
        }
  const CMatrix t = translation_operator(sp, 1, 2);
  CHECK(max_abs(t.adjoint() * t - CMatrix::Identity(8, 8)) < 1e-12);
}

TEST_CASE("Weyl quantization of trigonometric symbols") {
  const HilbertSpace sp = HilbertSpace::make(16);
  const Operator c = quantize_observable([](double x, double) { return std::cos(kTwoPi * x); }, sp);
  CHECK(c.hermitian);
  CHECK(max_abs(c.matrix - 0.5 * (translation_operator(sp, 1, 0) + translation_operator(sp, -1, 0))) < 1e-12);
  const Operator one = quantize_observable([](double, double) { return 1.0; }, sp);
  CHECK(max_abs(one.matrix - CMatrix::Identity(16, 16)) < 1e-12);
  // cos(2 pi x) is diagonal in position
  for (int j = 0; j < 16; ++j) CHECK(c.matrix(j, j).real() == doctest::Approx(std::cos(kTwoPi * j / 16)));
}

TEST_CASE("assembly matches the translation sum") {
  const Symbol a = [](double x, double xi) {
    return std::exp(std::cos(kTwoPi * x) + 0.5 * std::sin(kTwoPi * (x + 2 * xi)));
  };
  for (int N : {2, 4, 8}) {
    const HilbertSpace sp = HilbertSpace::make(N);
    QuantizeOptions o;
    o.allow_truncation = true;
    o.sample_size = 32;
    CHECK(max_abs(quantize_observable(a, sp, o).matrix - weyl_by_translations(a, sp, 32)) < 1e-12);
  }
}

TEST_CASE("band-limit breach is an error unless truncation is allowed") {
  const HilbertSpace sp = HilbertSpace::make(8);
  const Symbol a = [](double x, double) { return std::cos(kTwoPi * 6 * x); };
  CHECK_THROWS_AS(quantize_observable(a, sp), InputError);
  QuantizeReport rep;
  quantize_observable(a, sp, WordOperators::truncating(), &rep);
  CHECK(rep.truncated);
  CHECK(rep.tail_fraction == doctest::Approx(1.0));
}

TEST_CASE("anti-Wick quantization is positive") {
  const HilbertSpace sp = HilbertSpace::make(32);
  BallBump b;
  QuantizeOptions o = WordOperators::truncating();
  o.flavor = Quantization::AntiWick;
  QuantizeReport rep;
  const Operator op = quantize_observable(b.symbol(), sp, o, &rep);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(op.matrix);
  // exact up to aliasing in the sampled Fourier coefficients of the compact bump
  CHECK(rep.tail_fraction < 1e-12);
  CHECK(es.eigenvalues().minCoeff() > -1e-8);
}

TEST_CASE("propagator is unitary and its factored form matches the dense matrix") {
  const HilbertSpace sp = HilbertSpace::make(64);
  const Propagator u(AnosovMapSpec::cat(0.05), sp);
  const CMatrix d = u.dense();
  CHECK(max_abs(d.adjoint() * d - CMatrix::Identity(64, 64)) < 1e-12);
  const CVector v = CVector::Random(64);
  CHECK((u.apply(v) - d * v).norm() < 1e-12);
  CHECK((u.apply_inverse(u.apply(v)) - v).norm() < 1e-12);
  CHECK(max_abs(power(u, 3) - d * d * d) < 1e-11);
  CHECK(max_abs(power(u, -2) - (d * d).adjoint()) < 1e-11);
}

TEST_CASE("shear quantizations") {
  const int N = 16;
  const HilbertSpace sp = HilbertSpace::make(N);
  AnosovMapSpec shear = AnosovMapSpec::cat(0.0);
  shear.linear << 1, 0, 1, 1;
  const CMatrix l = Propagator(shear, sp).dense();
  for (int j = 0; j < N; ++j) CHECK(std::abs(l(j, j) - std::polar(1.0, kPi * j * j / N)) < 1e-12);
  CHECK(max_abs(l - CMatrix(l.diagonal().asDiagonal())) < 1e-12);
  AnosovMapSpec flip = AnosovMapSpec::cat(0.0);
  flip.linear << -1, 0, 0, -1;
  const CMatrix p = Propagator(flip, sp).dense();
  for (int j = 0; j < N; ++j) CHECK(std::abs(p((N - j) % N, j) - 1.0) < 1e-12);
}

TEST_CASE("exact Egorov for linear maps") {
  const Symbol a = [](double x, double xi) { return std::cos(kTwoPi * (x + 2 * xi)) + 0.3 * std::sin(kTwoPi * xi); };
  for (auto m : {std::array<int, 4>{2, 1, 1, 1}, {3, 2, 4, 3}, {1, 1, 1, 2}}) {
    AnosovMapSpec spec = AnosovMapSpec::cat(0.0);
    spec.linear << m[0], m[1], m[2], m[3];
    // [[3,2],[4,3]]^2 sends frequency (1,2) to (65,46): N = 256 keeps it in band
    for (int t : {0, 1, 2}) {
      const EgorovResult r = egorov_discrepancy(spec, a, HilbertSpace::make(256), t);
      CHECK(r.band_limited);
      CHECK(r.discrepancy < 1e-10);
    }
  }
}

TEST_CASE("Egorov discrepancy of the perturbed map shrinks with h") {
  const Symbol a = [](double, double xi) { return std::cos(kTwoPi * xi); };
  const AnosovMapSpec spec = AnosovMapSpec::cat(0.05);
  const double d64 = egorov_discrepancy(spec, a, HilbertSpace::make(64), 1).discrepancy;
  const double d256 = egorov_discrepancy(spec, a, HilbertSpace::make(256), 1).discrepancy;
  CHECK(d64 > 0);
  CHECK(d256 < d64 / 8);
}

TEST_CASE("Heisenberg evolution") {
  const HilbertSpace sp = HilbertSpace::make(32);
  const Propagator u(AnosovMapSpec::cat(0.05), sp);
  const Operator a = quantize_observable([](double x, double xi) { return std::cos(kTwoPi * (x - xi)); }, sp);
  CHECK(max_abs(heisenberg(a, u, 0).matrix - a.matrix) < 1e-13);
  const Operator a3 = heisenberg(a, u, 3);
  CHECK(max_abs(heisenberg(heisenberg(a, u, 1), u, 2).matrix - a3.matrix) < 1e-10);
  CHECK(operator_norm(a3.matrix) == doctest::Approx(operator_norm(a.matrix)).epsilon(1e-10));
  const CMatrix d = u.dense();
  CHECK(max_abs(a3.matrix - (d * d * d).adjoint() * a.matrix * d * d * d) < 1e-10);
}

TEST_CASE("word operators: definition, reversal and concatenation") {
  const AnosovMapSpec spec = AnosovMapSpec::cat(0.05);
  const Partition part;
  const HilbertSpace sp = HilbertSpace::make(32);
  const WordOperators ops(spec, part, sp, Alphabet::Coarse);
  const Propagator& u = ops.propagator();
  CHECK(max_abs(ops.build(Word{}).matrix - CMatrix::Identity(32, 32)) < 1e-14);

  std::mt19937_64 rng(31);
  for (int k = 0; k < 6; ++k) {
    const int n = 1 + k % 4;
    const Word v = random_word(rng, n, Orientation::Future);
    // definition: product of A_{v_j}(j) from the left, highest time first
    CMatrix def = CMatrix::Identity(32, 32);
    for (int j = 0; j < n; ++j) def = power(u, -j) * ops.letter(v.letters[j]) * power(u, j) * def;
    CHECK(max_abs(ops.build(v).matrix - def) < 1e-11);

    Word p = v;
    p.orientation = Orientation::Past;
    const CMatrix rev = power(u, n) * ops.build(v.reversed()).matrix * power(u, -n);
    CHECK(max_abs(ops.build(p).matrix - rev) < 1e-10);

    const Word w = random_word(rng, 1 + k % 3, Orientation::Past);
    const Word vp = p;
    const CMatrix lhs = ops.build(concat(vp, w)).matrix;
    const CMatrix rhs = power(u, n) * ops.build(v.reversed()).matrix * ops.build(w).matrix * power(u, -n);
    CHECK(max_abs(lhs - rhs) < 1e-10);
    CHECK(ops.norm(v) == doctest::Approx(operator_norm(ops.build(v).matrix)).epsilon(1e-9));
  }
}

TEST_CASE("key estimate word length") {
  const double l0 = std::log((3.0 + std::sqrt(5.0)) / 2.0);
  std::vector<int> n;
  for (int N : {128, 256, 512, 1024}) n.push_back(key_word_length(HilbertSpace::make(N).h(), l0, 7.0 / 6.0));
  CHECK(n == std::vector<int>{9, 10, 11, 12});
}

TEST_CASE("key estimate: worst sample dominates all-star") {
  const AnosovMapSpec spec = AnosovMapSpec::cat(0.0);
  const Partition part;
  const ExpansionRates r = estimate_expansion_rates(spec);
  KeyEstimateOptions star, worst;
  worst.policy = WordPolicy::WorstOfSample;
  worst.samples = 8;
  const auto a = key_estimate_scan(spec, part, {32, 64}, r, star);
  const auto b = key_estimate_scan(spec, part, {32, 64}, r, worst);
  for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(b.rows[i].norm >= a.rows[i].norm - 1e-12);
}

TEST_CASE("eigensystem") {
  CMatrix d = CMatrix::Zero(3, 3);
  d.diagonal() << cdouble(0, 2), 1.0, -3.0;
  const EigenSystem e = eigensystem(d);
  CHECK(std::abs(e.pairs[0].value + 3.0) < 1e-12);
  CHECK(std::abs(e.pairs[2].value - 1.0) < 1e-12);
  CHECK(eigensystem(CMatrix::Identity(4, 4)).pairs[3].value == cdouble(1.0));
  const EigenSystem u = eigensystem(Propagator(AnosovMapSpec::cat(0.05), HilbertSpace::make(256)).dense());
  CHECK(u.max_residual < 1e-8);
  for (const auto& p : u.pairs) CHECK(std::abs(std::abs(p.value) - 1.0) < 1e-8);
  CHECK_THROWS_AS(eigensystem(CMatrix::Identity(2050, 2050)), ResourceError);
}

TEST_CASE("semiclassical measures") {
  const HilbertSpace sp = HilbertSpace::make(64);
  CVector u = CVector::Zero(64);
  u(16) = 1.0;  // position x = 1/4
  BallBump b;
  b.center = {0.25, 0.5};
  b.radius = 0.3;
  const auto one = quantize_observable([](double, double) { return 1.0; }, sp);
  const auto ball = quantize_observable(b.symbol(), sp, WordOperators::truncating());
  const auto cos = quantize_observable([](double x, double) { return std::cos(kTwoPi * x); }, sp);
  const auto m = semiclassical_measure(u, {one, ball, cos});
  CHECK(m[0] == cdouble(1.0));
  CHECK(std::abs(m[1].imag()) < 1e-13);
  CHECK(m[2].real() == doctest::Approx(0.0).epsilon(1e-12).scale(1));
  // the position eigenstate spreads over all xi, so it sees the xi-average of b at x = 1/4
  CHECK(m[1].real() > 0.4);
  CVector w = CVector::Random(64);
  w.normalize();
  const Operator sum = make_operator(ball.matrix + 2.0 * cos.matrix, "sum");
  const auto s = semiclassical_measure(w, {ball, cos, sum});
  CHECK(std::abs(s[2] - (s[0] + 2.0 * s[1])) < 1e-12);
}

TEST_CASE("mass scan: unit symbol and the N = 2 brute force") {
  const AnosovMapSpec spec = AnosovMapSpec::cat(0.05);
  CHECK(mass_scan(spec, [](double, double) { return 1.0; }, {16})[0].min_mass == doctest::Approx(1.0));
  BallBump b;
  b.radius = 0.25;
  const Symbol a = b.symbol();
  const auto rows = mass_scan(spec, a, {2, 4});
  for (const auto& row : rows) {
    const HilbertSpace sp = HilbertSpace::make(row.N);
    const CMatrix op = weyl_by_translations(a, sp, std::max(2 * row.N, 128));
    Eigen::ComplexEigenSolver<CMatrix> es(Propagator(spec, sp).dense());
    double lo = 1e300;
    for (int k = 0; k < row.N; ++k) {
      const CVector v = es.eigenvectors().col(k).normalized();
      lo = std::min(lo, v.dot(op * v).real());
    }
    CHECK(row.min_mass == doctest::Approx(lo).epsilon(1e-12));
    CHECK(row.eigencount == row.N);
  }
}

TEST_CASE("damped propagator") {
  const AnosovMapSpec spec = AnosovMapSpec::cat(0.0);
  const HilbertSpace sp = HilbertSpace::make(32);
  DampedSpec zero{[](double, double) { return 0.0; }, false};
  const CMatrix d0 = damped_propagator(spec, zero, sp).dense();
  CHECK(max_abs(d0 - Propagator(spec, sp).dense()) < 1e-12);
  DampedSpec c{[](double, double) { return 0.7; }, false};
  const DampedPropagator dc = damped_propagator(spec, c, sp);
  CHECK(operator_norm(dc.dense()) == doctest::Approx(std::exp(-0.7)).epsilon(1e-8));
  const CVector v = CVector::Random(32);
  CHECK((dc.apply(v) - dc.dense() * v).norm() < 1e-12);
  DampedSpec left = c;
  left.left = true;
  CHECK(max_abs(damped_propagator(spec, left, sp).dense() - dc.dense()) < 1e-12);
}

TEST_CASE("damping arithmetic") {
  CHECK(damped_alpha1(0.1, 0.3, 1.0) == doctest::Approx(0.005));
  CHECK(damped_beta1(0.2, 0.005) == doctest::Approx(0.005));
  CHECK(damped_beta1(0.02, 0.5) == doctest::Approx(0.01));
  CHECK(damped_beta1(2.0, 0.9) == doctest::Approx(0.25));
  const Partition part;
  DampedSpec d{[](double, double) { return 0.3; }, false};
  CHECK(damping_eta(d, part) == doctest::Approx(0.3));
}

TEST_CASE("more damping never increases word norms") {
  const AnosovMapSpec spec = AnosovMapSpec::cat(0.0);
  const HilbertSpace sp = HilbertSpace::make(64);
  BallBump b;
  b.radius = 0.3;
  b.amplitude = 0.5;
  BallBump b2 = b;
  b2.amplitude = 1.0;
  const CMatrix u1 = damped_propagator(spec, {b.symbol(), false}, sp).dense();
  const CMatrix u2 = damped_propagator(spec, {b2.symbol(), false}, sp).dense();
  CMatrix p1 = u1, p2 = u2;
  for (int k = 0; k < 5; ++k) p1 = u1 * p1, p2 = u2 * p2;
  CHECK(operator_norm(p2) <= operator_norm(p1) + 1e-10);
}
