#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/instances.hpp"
#include "fuplab/words.hpp"

using namespace fuplab;

namespace {
const double kGolden = std::log((3.0 + std::sqrt(5.0)) / 2.0);
}

TEST_CASE("word text round trip") {
  const Word c = Word::parse("1**1*", Alphabet::Coarse, Orientation::Future);
  CHECK(c.letters == std::vector<int>{1, kStar, kStar, 1, kStar});
  CHECK(c.str() == "1**1*");
  CHECK(c.reversed().str() == "*1**1");
  const Word r = Word::parse("1.7.3", Alphabet::Refined, Orientation::Past);
  CHECK(r.letters == std::vector<int>{1, 7, 3});
  CHECK(r.str() == "1.7.3");
  CHECK(concat(c, c).size() == 10u);
  CHECK_THROWS_AS(Word::parse("1x", Alphabet::Coarse, Orientation::Future), InputError);
  CHECK_THROWS_AS(Word::parse("1..2", Alphabet::Refined, Orientation::Future), InputError);
}

TEST_CASE("letter times") {
  const Word f{Alphabet::Coarse, {1, 0, 1}, Orientation::Future};
  const Word p{Alphabet::Coarse, {1, 0, 1}, Orientation::Past};
  CHECK(letter_time(f, 0) == 0);
  CHECK(letter_time(f, 2) == 2);
  CHECK(letter_time(p, 0) == -1);
  CHECK(letter_time(p, 2) == -3);
}

TEST_CASE("word sets agree with pointwise pullbacks") {
  const AnosovMapSpec spec = AnosovMapSpec::cat(0.05);
  const Partition part;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto orient : {Orientation::Future, Orientation::Past}) {
    const Word w{Alphabet::Coarse, {kStar, 1, kStar, kStar}, orient};
    for (int k = 0; k < 300; ++k) {
      const TorusPoint p{u(rng), u(rng)};
      bool inside = true;
      double value = 1.0;
      for (std::size_t j = 0; j < w.size(); ++j) {
        const TorusPoint q = apply_map(spec, p, letter_time(w, j));
        inside = inside && part.contains(Alphabet::Coarse, w.letters[j], q);
        value *= part.symbol(Alphabet::Coarse, w.letters[j], q.x, q.xi);
      }
      CHECK(word_set_contains(spec, part, w, p) == inside);
      CHECK(word_symbol_at(spec, part, w, p) == doctest::Approx(value).epsilon(1e-12));
    }
  }
}

TEST_CASE("star set is the complement of the hole core") {
  const AnosovMapSpec spec = AnosovMapSpec::cat(0.0);
  const Partition part;
  const Grid2 g{64};
  const Mask m = word_set(spec, part, Word{Alphabet::Coarse, {kStar}, Orientation::Future}, g);
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i)
      CHECK(m.at(i, j) == (torus_distance(g.point(i, j), part.hole().center) > part.hole().inner()));
}

TEST_CASE("word Jacobian of the linear map is exp(n lambda)") {
  const Partition part;
  const Word w{Alphabet::Coarse, std::vector<int>(5, kStar), Orientation::Future};
  const WordJacobian j = word_jacobian(AnosovMapSpec::cat(0.0), part, w, 64);
  CHECK_FALSE(j.empty);
  CHECK(std::log(j.value) == doctest::Approx(5 * kGolden).epsilon(1e-9));
}

TEST_CASE("Ehrenfest time of the linear map") {
  const Partition part;
  const Word w{Alphabet::Coarse, std::vector<int>(20, kStar), Orientation::Future};
  const double h = std::ldexp(1.0, -12);
  const EhrenfestTime t = local_ehrenfest_time(AnosovMapSpec::cat(0.0), part, w, h, 0.5, 64);
  REQUIRE(t.status == EhrenfestTime::Status::Found);
  CHECK(t.m == static_cast<int>(std::ceil(0.5 * std::log(1.0 / h) / kGolden)));
}

TEST_CASE("cluster examples") {
  const double h = 1e-3, s = std::pow(h, 2.0 / 3.0);
  auto items = [](std::vector<double> zs) {
    std::vector<ClusterItem> out;
    int k = 2;
    for (double z : zs) out.push_back({Word{Alphabet::Refined, {k++}, Orientation::Past}, z});
    return out;
  };
  CHECK(cluster_partition(items({0.3}), h).size() == 1u);
  CHECK(cluster_partition(items({0.0, 2 * s, 4 * s}), h).size() == 3u);
  CHECK(cluster_partition(items({0.0, 0.4 * s}), h).size() == 1u);
}

TEST_CASE("cluster post-conditions on random instances") {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 30; ++k) {
    const double h = std::ldexp(1.0, -8 - k % 6);
    const auto items = fuplab::testing::random_cluster_items(rng, h);
    const auto clusters = cluster_partition(items, h);
    const auto c = fuplab::testing::check_clusters(items, clusters, h);
    CHECK(c.ok());
    CHECK(c.overlap >= 1);
  }
}

TEST_CASE("moderate words stop at the threshold") {
  const AnosovMapSpec spec = AnosovMapSpec::cat(0.0);
  const Partition part;
  const Word coarse{Alphabet::Coarse, std::vector<int>(6, kStar), Orientation::Past};
  ModerateWordsOptions opt;
  opt.grid_n = 128;
  const double h = 0.01;
  const ModerateWords mw = moderate_words(spec, part, coarse, 2, h, 1, opt);
  CHECK(mw.tau == doctest::Approx(0.9));
  // J^+ of a length-m word is exp(m lambda) for the linear map
  const int m = static_cast<int>(std::ceil(std::log(mw.threshold) / kGolden - 1e-12));
  for (const auto& w : mw.words) {
    CHECK(w.word.size() == static_cast<std::size_t>(m));
    CHECK(w.jacobian >= mw.threshold * (1 - 1e-9));
    CHECK(w.word.letters.front() == 2);
    for (std::size_t j = 1; j < w.word.size(); ++j) CHECK(w.word.letters[j] >= 2);
  }
  CHECK_THROWS_AS(moderate_words(spec, part, coarse, 1, h, 1, opt), InputError);
}
