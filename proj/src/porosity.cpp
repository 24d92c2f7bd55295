#include "fuplab/porosity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fuplab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

IntervalSet IntervalSet::from_intervals(std::vector<Interval> pieces) {
  for (const auto& p : pieces)
    if (!(p.left <= p.right) || !std::isfinite(p.left) || !std::isfinite(p.right))
      throw InputError("interval set: need finite left <= right");
  std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) {
    return a.left < b.left || (a.left == b.left && a.right < b.right);
  });
  IntervalSet s;
  for (const auto& p : pieces) {
    if (!s.pieces_.empty() && p.left <= s.pieces_.back().right)
      s.pieces_.back().right = std::max(s.pieces_.back().right, p.right);
    else
      s.pieces_.push_back(p);
  }
  return s;
}

IntervalSet IntervalSet::cantor(int base, const std::vector<int>& digits, int k) {
  if (base < 2 || k < 0 || digits.empty()) throw InputError("cantor: bad parameters");
  for (int d : digits)
    if (d < 0 || d >= base) throw InputError("cantor: digit out of range");
  std::vector<double> lefts{0.0};
  double len = 1.0;
  for (int level = 0; level < k; ++level) {
    len /= base;
    std::vector<double> next;
    next.reserve(lefts.size() * digits.size());
    for (double l : lefts)
      for (int d : digits) next.push_back(l + d * len);
    lefts.swap(next);
  }
  std::vector<Interval> pieces;
  pieces.reserve(lefts.size());
  for (double l : lefts) pieces.push_back({l, l + len});
  return from_intervals(std::move(pieces));
}

double IntervalSet::measure() const {
  double m = 0.0;
  for (const auto& p : pieces_) m += p.length();
  return m;
}

Interval IntervalSet::hull() const {
  if (pieces_.empty()) throw InputError("hull of an empty set");
  return {pieces_.front().left, pieces_.back().right};
}

bool IntervalSet::contains(double x) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double v, const Interval& p) { return v < p.left; });
  if (it == pieces_.begin()) return false;
  --it;
  return x <= it->right;
}

IntervalSet IntervalSet::scaled(double c) const {
  if (!(c > 0)) throw InputError("scale factor must be positive");
  std::vector<Interval> out;
  for (const auto& p : pieces_) out.push_back({c * p.left, c * p.right});
  return from_intervals(std::move(out));
}

IntervalSet IntervalSet::shifted(double d) const {
  std::vector<Interval> out;
  for (const auto& p : pieces_) out.push_back({p.left + d, p.right + d});
  return from_intervals(std::move(out));
}

IntervalSet IntervalSet::fattened(double r) const {
  if (!(r >= 0)) throw InputError("fattening radius must be >= 0");
  std::vector<Interval> out;
  for (const auto& p : pieces_) out.push_back({p.left - r, p.right + r});
  return from_intervals(std::move(out));
}

double largest_gap_in(const IntervalSet& set, const Interval& I) {
  const auto& ps = set.intervals();
  if (ps.empty()) return I.length();
  double best = 0.0;
  auto take = [&](double p, double q) {
    best = std::max(best, std::min(q, I.right) - std::max(p, I.left));
  };
  take(-kInf, ps.front().left);
  for (std::size_t i = 0; i + 1 < ps.size(); ++i) take(ps[i].right, ps[i + 1].left);
  take(ps.back().right, kInf);
  return best;
}

// Porosity at a single scale L reduces to: for consecutive gaps among those of length
// >= nu L (unbounded ends included), the stretch D between them satisfies
// D <= (1 - 2 nu) L. As L grows, gaps drop out of that list in order of length, and
// dropping a gap merges the stretches on both sides, so the largest stretch only grows.
PorosityCheck check_porosity(const IntervalSet& set, double nu, const ScaleWindow& w) {
  if (!(nu > 0 && nu < 1)) throw InputError("porosity: nu must lie in (0,1)");
  if (!(w.lo > 0 && w.lo <= w.hi)) throw InputError("porosity: need 0 < alpha_0 <= alpha_1");
  PorosityCheck res;
  const auto& ps = set.intervals();
  const std::size_t m = ps.size();
  if (m == 0) return res;

  // gaps 0..m; gap g spans (ps[g-1].right, ps[g].left), ends are unbounded
  std::vector<double> glen(m + 1, kInf);
  for (std::size_t g = 1; g < m; ++g) glen[g] = ps[g].left - ps[g - 1].right;
  auto gap_start = [&](std::size_t g) { return g == 0 ? -kInf : ps[g - 1].right; };
  auto gap_end = [&](std::size_t g) { return g == m ? kInf : ps[g].left; };

  // linked list of surviving gaps
  std::vector<std::size_t> prev(m + 1), next(m + 1);
  for (std::size_t g = 0; g <= m; ++g) {
    prev[g] = g == 0 ? 0 : g - 1;
    next[g] = g + 1;
  }
  double max_d = -1.0;
  std::size_t arg_left = 0;
  auto consider = [&](std::size_t a) {
    const std::size_t b = next[a];
    const double d = gap_start(b) - gap_end(a);
    if (d > max_d) {
      max_d = d;
      arg_left = a;
    }
  };
  auto remove = [&](std::size_t g) {
    const std::size_t a = prev[g], b = next[g];
    next[a] = b;
    prev[b] = a;
    consider(a);
  };

  std::vector<std::size_t> order;
  for (std::size_t g = 1; g < m; ++g) order.push_back(g);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return glen[a] < glen[b]; });
  std::size_t cursor = 0;

  const double coef = 1.0 - 2.0 * nu;
  auto fail_with = [&](double L) {
    res.porous = false;
    const std::size_t b = next[arg_left];
    const double mid = 0.5 * (gap_end(arg_left) + gap_start(b));
    res.witness = Interval{mid - 0.5 * L, mid + 0.5 * L};
  };

  // piece [lo, first critical]: gaps shorter than nu * lo are gone
  while (cursor < order.size() && glen[order[cursor]] < nu * w.lo) remove(order[cursor++]);
  for (std::size_t g = 0; g < m; g = next[g]) consider(g);

  double left = w.lo;
  bool left_open = false;
  for (;;) {
    // the current big-gap set holds on (left, right]
    double right = w.hi;
    if (cursor < order.size()) right = std::min(right, glen[order[cursor]] / nu);
    if (coef > 0) {
      if (max_d > coef * left) {
        double L = left;
        if (left_open) L = left + 0.5 * std::min(right - left, max_d / coef - left);
        fail_with(L);
        return res;
      }
    } else if (max_d > coef * right) {
      fail_with(right);
      return res;
    }
    if (cursor >= order.size() || glen[order[cursor]] / nu >= w.hi) break;
    // gaps of exactly this length leave together
    const double cut = glen[order[cursor]];
    while (cursor < order.size() && glen[order[cursor]] == cut) remove(order[cursor++]);
    left = cut / nu;
    left_open = true;
  }
  return res;
}

PorosityReport porosity_report(const IntervalSet& set, const ScaleWindow& window, double tol) {
  PorosityReport r;
  r.window = window;
  if (!is_porous(set, tol, window)) {
    r.nu_star = 0.0;
    r.witness = check_porosity(set, tol, window).witness;
    return r;
  }
  if (is_porous(set, 1.0 - tol, window)) {
    r.nu_star = 1.0 - tol;
    return r;
  }
  double lo = tol, hi = 1.0 - tol;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (is_porous(set, mid, window) ? lo : hi) = mid;
  }
  r.nu_star = lo;
  r.witness = check_porosity(set, hi, window).witness;
  return r;
}

std::vector<ProfileRow> porosity_profile(const IntervalSet& set, const std::vector<double>& scales,
                                         double tol) {
  std::vector<ProfileRow> rows;
  for (double s : scales) rows.push_back({s, porosity_report(set, {s, s}, tol).nu_star});
  return rows;
}

MapBounds map_bounds(const MonotoneMap& psi, const Interval& domain, int samples) {
  MapBounds b;
  double c = 0.0;
  int sign = 0;
  for (int i = 0; i <= samples; ++i) {
    const double x = domain.left + domain.length() * i / samples;
    const double d1 = psi.df(x);
    if (d1 == 0.0) b.monotone = false;
    const int s = d1 > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    if (s != sign) b.monotone = false;
    c = std::max({c, std::abs(d1), 1.0 / std::abs(d1), std::abs(psi.d2f(x))});
  }
  b.c1 = c;
  return b;
}

IntervalSet map_image(const IntervalSet& set, const MonotoneMap& psi) {
  if (set.empty()) return {};
  if (!map_bounds(psi, set.hull()).monotone) throw InputError("map_image: map is not monotone");
  std::vector<Interval> out;
  for (const auto& p : set.intervals()) {
    const double a = psi.f(p.left), b = psi.f(p.right);
    out.push_back({std::min(a, b), std::max(a, b)});
  }
  return IntervalSet::from_intervals(std::move(out));
}

IntervalSet dynamical_trace(const AnosovMapSpec& spec, const Partition& part, const Word& w,
                            const TorusLine& line, int resolution) {
  if (resolution < 2) throw InputError("trace resolution must be >= 2");
  const Eigen::Vector2d dir = line.direction.normalized();
  auto inside = [&](double s) {
    return word_set_contains(spec, part, w,
                             wrap(line.base.x + s * dir(0), line.base.xi + s * dir(1)));
  };
  std::vector<std::uint8_t> in(resolution);
  std::vector<double> s(resolution);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < resolution; ++i) {
    s[i] = line.length * i / (resolution - 1);
    in[i] = inside(s[i]);
  }
  auto refine = [&](double out_s, double in_s) {
    for (int k = 0; k < 48; ++k) {
      const double mid = 0.5 * (out_s + in_s);
      (inside(mid) ? in_s : out_s) = mid;
    }
    return in_s;
  };
  std::vector<Interval> pieces;
  int i = 0;
  while (i < resolution) {
    if (!in[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < resolution && in[j + 1]) ++j;
    const double l = i == 0 ? s[0] : refine(s[i - 1], s[i]);
    const double r = j == resolution - 1 ? s[j] : refine(s[j + 1], s[j]);
    pieces.push_back({l, r});
    i = j + 1;
  }
  return IntervalSet::from_intervals(std::move(pieces));
}

bool density_check(const AnosovMapSpec& spec, const Mask& set, double l0, double l1, Bundle field,
                   int base, int samples_per_unit) {
  if (!(l0 > 0 && l1 > 0 && l1 <= l0)) throw InputError("density_check: need 0 < l1 <= l0");
  const int n = set.grid.n;
  auto interior = [&](const TorusPoint& p) {
    const int i = static_cast<int>(std::floor(wrap_unit(p.x) * n));
    const int j = static_cast<int>(std::floor(wrap_unit(p.xi) * n));
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj)
        if (!set.at(((i + di) % n + n) % n, ((j + dj) % n + n) % n)) return false;
    return true;
  };
  const int samples = std::max(2, static_cast<int>(std::ceil(l0 * samples_per_unit)) + 1);
  const double ds = l0 / (samples - 1);
  bool ok = true;
#pragma omp parallel for collapse(2) schedule(dynamic) reduction(&& : ok)
  for (int bi = 0; bi < base; ++bi)
    for (int bj = 0; bj < base; ++bj) {
      const TorusPoint p0{(bi + 0.5) / base, (bj + 0.5) / base};
      const Eigen::Vector2d e = field == Bundle::Unstable ? unstable_direction(spec, p0).direction
                                                          : stable_direction(spec, p0).direction;
      double run = -1.0;  // start of the current interior run, -1 if none
      bool found = false;
      for (int k = 0; k < samples && !found; ++k) {
        const double s = k * ds;
        if (interior(wrap(p0.x + s * e(0), p0.xi + s * e(1)))) {
          if (run < 0) run = s;
          if (s - run >= l1) found = true;
        } else {
          run = -1.0;
        }
      }
      ok = ok && found;
    }
  return ok;
}

}  // namespace fuplab
