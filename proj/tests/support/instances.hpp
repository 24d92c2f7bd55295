#pragma once

// Random instances and independent checks shared by the unit tests and the
// acceptance runner.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fuplab/kernels.hpp"
#include "fuplab/porosity.hpp"
#include "fuplab/words.hpp"

namespace fuplab::testing {

// Union of a few intervals whose endpoints are multiples of delta inside [0,1].
inline IntervalSet lattice_set(std::mt19937_64& rng, double delta, int max_pieces = 12) {
  const int cells = static_cast<int>(std::lround(1.0 / delta));
  std::uniform_int_distribution<int> count(1, max_pieces);
  std::uniform_int_distribution<int> pos(0, cells);
  std::uniform_int_distribution<int> len(0, cells / 16);
  std::vector<Interval> pieces;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const int a = pos(rng);
    const int b = std::min(cells, a + len(rng));
    pieces.push_back({a * delta, b * delta});
  }
  return IntervalSet::from_intervals(pieces);
}

// Brute-force nu_star at one scale s for a set with endpoints on delta Z. The largest
// gap in [a, a + s] is a maximum of piecewise linear functions of a whose corners lie
// on delta Z or delta Z - s, and two of them cross on (delta/2) Z - s/2; scanning
// those lattices finds the exact minimum.
inline double lattice_oracle(const IntervalSet& set, double s, double delta) {
  if (set.empty()) return 1.0;
  std::vector<double> lefts, rights;
  for (const auto& p : set.intervals()) lefts.push_back(p.left), rights.push_back(p.right);
  const Interval hull = set.hull();
  const double step = 0.5 * delta;
  const double lo = std::floor((hull.left - s) / step) * step;
  const double hi = std::ceil(hull.right / step) * step;
  const int positions = static_cast<int>(std::lround((hi - lo) / step)) + 1;
  double best = 1.0;
  for (const double shift : {0.0, -s, -0.5 * s})
    best = std::min(best, kernels::brute_force_gap_ratio(lefts, rights, s, lo + shift, hi + shift, positions,
                                                         kernels::Exec::Parallel));
  return best;
}

// Random multi-scale set: each interval is split into b in {3,4,5} parts and keeps a
// random nonempty proper subset, independently, until pieces are shorter than min_len.
// Porous on scales from a few min_len up to 1.
inline IntervalSet random_porous_set(std::mt19937_64& rng, double min_len) {
  std::vector<Interval> cur{{0.0, 1.0}};
  std::uniform_int_distribution<int> base(3, 5);
  while (cur.front().length() >= min_len && cur.size() < 4096) {
    const int b = base(rng);
    std::vector<Interval> next;
    for (const auto& I : cur) {
      const double len = I.length() / b;
      std::uint32_t keep = 0;
      while (keep == 0 || keep == (1u << b) - 1) keep = static_cast<std::uint32_t>(rng()) & ((1u << b) - 1);
      for (int d = 0; d < b; ++d)
        if (keep >> d & 1) next.push_back({I.left + d * len, I.left + (d + 1) * len});
    }
    cur.swap(next);
  }
  return IntervalSet::from_intervals(cur);
}

struct LemmaCase {
  bool applicable = false;  // hypotheses hold and the target window is nonempty
  bool holds = false;
};

// Fattening: nu-porous on [a0, a1] and a2 <= nu a1 / 3 give nu/3-porosity of
// Omega(a2) on [max(a0, 3 a2 / nu), a1].
inline LemmaCase porous_nbhd_case(std::mt19937_64& rng, double delta) {
  LemmaCase c;
  const IntervalSet set = random_porous_set(rng, delta);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const ScaleWindow w{delta * (5 + 20 * u(rng)), 0.05 + 0.5 * u(rng)};
  const double nu = porosity_report(set, w).nu_star;
  if (!(nu > 1e-3) || !is_porous(set, nu, w)) return c;
  const double a2 = (nu * w.hi / 3.0) * (0.01 + 0.99 * u(rng));
  const ScaleWindow target{std::max(w.lo, 3.0 * a2 / nu), w.hi};
  if (target.lo > target.hi) return c;
  c.applicable = true;
  c.holds = is_porous(set.fattened(a2), nu / 3.0, target);
  return c;
}

// Image under psi(x) = x + A sin(b x): C1 bounds its derivatives on all of R,
// a0 <= min(a1 / C1^2, 1 / (2 C1^4)), conclusion nu/2 on [C1 a0, min(a1 / C1, 1 / (2 C1^3))].
inline LemmaCase porous_map_case(std::mt19937_64& rng, double delta) {
  LemmaCase c;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double b = 1.0 + 4.0 * u(rng);
  const double A = 0.3 / b * u(rng);
  MonotoneMap psi{[=](double x) { return x + A * std::sin(b * x); },
                  [=](double x) { return 1.0 + A * b * std::cos(b * x); },
                  [=](double x) { return -A * b * b * std::sin(b * x); }};
  // one full period sees every derivative value
  const double c1 = std::max(1.0, map_bounds(psi, {0.0, kTwoPi / b}, 1 << 14).c1);
  const IntervalSet set = random_porous_set(rng, delta);
  const double a1 = 0.05 + 0.4 * u(rng);
  const double a0 = std::min({delta * (5 + 20 * u(rng)), a1 / (c1 * c1), 0.5 / std::pow(c1, 4)});
  const ScaleWindow w{a0, a1};
  const double nu = porosity_report(set, w).nu_star;
  if (!(nu > 1e-3) || !is_porous(set, nu, w)) return c;
  const ScaleWindow target{c1 * a0, std::min(a1 / c1, 0.5 / std::pow(c1, 3))};
  if (target.lo > target.hi) return c;
  c.applicable = true;
  c.holds = is_porous(map_image(set, psi), nu / 2.0, target);
  return c;
}

struct ClusterCheck {
  bool partition = true;   // every item in exactly one cluster
  bool coverage = true;    // members within s of their centre
  bool separation = true;  // centres pairwise farther apart than s
  bool centred = true;     // each centre is the z of its first member
  int overlap = 0;
  bool ok() const { return partition && coverage && separation && centred; }
};

inline std::vector<ClusterItem> random_cluster_items(std::mt19937_64& rng, double h) {
  const double s = std::pow(h, 2.0 / 3.0);
  std::uniform_int_distribution<int> count(1, 60), len(1, 6), letter(1, 9);
  std::uniform_real_distribution<double> z(-10 * s, 10 * s);
  std::vector<ClusterItem> items(count(rng));
  for (auto& it : items) {
    it.word = Word{Alphabet::Refined, std::vector<int>(len(rng)), Orientation::Past};
    for (auto& l : it.word.letters) l = letter(rng);
    it.z = z(rng);
  }
  return items;
}

inline ClusterCheck check_clusters(const std::vector<ClusterItem>& items, const std::vector<Cluster>& clusters,
                                   double h) {
  const double s = std::pow(h, 2.0 / 3.0);
  ClusterCheck r;
  std::vector<int> seen(items.size(), 0);
  for (const auto& c : clusters) {
    if (c.members.empty() || items[c.members.front()].z != c.center) r.centred = false;
    for (const std::size_t m : c.members) {
      if (m >= items.size()) {
        r.partition = false;
        continue;
      }
      ++seen[m];
      if (std::abs(items[m].z - c.center) > s) r.coverage = false;
    }
  }
  for (const int n : seen)
    if (n != 1) r.partition = false;
  for (std::size_t i = 0; i < clusters.size(); ++i)
    for (std::size_t j = i + 1; j < clusters.size(); ++j)
      if (std::abs(clusters[i].center - clusters[j].center) <= s) r.separation = false;
  r.overlap = max_overlapping_clusters(items, clusters, h);
  return r;
}

}  // namespace fuplab::testing
