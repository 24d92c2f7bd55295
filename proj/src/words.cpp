#include "fuplab/words.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fuplab/kernels.hpp"

namespace fuplab {

Word Word::reversed() const {
  Word r = *this;
  std::reverse(r.letters.begin(), r.letters.end());
  return r;
}

std::string Word::str() const {
  std::string out;
  for (std::size_t j = 0; j < letters.size(); ++j) {
    if (alphabet == Alphabet::Coarse) {
      out += letters[j] == kStar ? '*' : '1';
    } else {
      if (j) out += '.';
      out += std::to_string(letters[j]);
    }
  }
  return out;
}

Word Word::parse(const std::string& text, Alphabet alphabet, Orientation orientation) {
  Word w{alphabet, {}, orientation};
  if (alphabet == Alphabet::Coarse) {
    for (char c : text) {
      if (c == '1')
        w.letters.push_back(1);
      else if (c == '*')
        w.letters.push_back(kStar);
      else
        throw InputError(std::string("coarse word: unexpected character '") + c + "'");
    }
  } else {
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, '.')) {
      try {
        w.letters.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw InputError("refined word: bad letter '" + tok + "'");
      }
    }
  }
  return w;
}

Word concat(const Word& v, const Word& w) {
  Word r = v;
  r.letters.insert(r.letters.end(), w.letters.begin(), w.letters.end());
  return r;
}

double word_symbol_at(const AnosovMapSpec& spec, const Partition& part, const Word& w,
                      const TorusPoint& p) {
  double val = 1.0;
  const bool future = w.orientation == Orientation::Future;
  TorusPoint q = future ? p : step_backward(spec, p);
  for (std::size_t j = 0; j < w.size(); ++j) {
    val *= part.symbol(w.alphabet, w.letters[j], q.x, q.xi);
    if (val == 0.0) return 0.0;
    if (j + 1 < w.size()) q = future ? step_forward(spec, q) : step_backward(spec, q);
  }
  return val;
}

bool word_set_contains(const AnosovMapSpec& spec, const Partition& part, const Word& w,
                       const TorusPoint& p) {
  const bool future = w.orientation == Orientation::Future;
  TorusPoint q = future ? p : step_backward(spec, p);
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (!part.contains(w.alphabet, w.letters[j], q)) return false;
    if (j + 1 < w.size()) q = future ? step_forward(spec, q) : step_backward(spec, q);
  }
  return true;
}

std::vector<double> word_symbol_grid(const AnosovMapSpec& spec, const Partition& part,
                                     const Word& w, const Grid2& grid) {
  return kernels::sample_word_symbol(spec, part, w, grid, kernels::Exec::Parallel);
}

Mask word_set(const AnosovMapSpec& spec, const Partition& part, const Word& w, const Grid2& grid) {
  return Mask{grid, kernels::sample_word_mask(spec, part, w, grid, kernels::Exec::Parallel)};
}

namespace {

double word_log_jacobian_at(const AnosovMapSpec& spec, const Word& w, const TorusPoint& p) {
  const int n = static_cast<int>(w.size());
  return w.orientation == Orientation::Future ? log_jacobian(spec, p, n, Bundle::Unstable)
                                              : log_jacobian(spec, p, -n, Bundle::Stable);
}

}  // namespace

WordJacobian word_jacobian(const AnosovMapSpec& spec, const Partition& part, const Word& w,
                           int grid_n) {
  for (int l : w.letters) part.check_letter(w.alphabet, l);
  WordJacobian r;
  r.grid = grid_n;
  const Grid2 grid{grid_n};
  const Mask mask = word_set(spec, part, w, grid);
  std::vector<std::size_t> cells;
  for (std::size_t k = 0; k < mask.cells.size(); ++k)
    if (mask.cells[k]) cells.push_back(k);
  r.cells = cells.size();
  if (cells.empty()) return r;
  r.empty = false;

  std::vector<double> lj(cells.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(cells.size()); ++c) {
    const int i = static_cast<int>(cells[c] % grid_n), j = static_cast<int>(cells[c] / grid_n);
    lj[c] = word_log_jacobian_at(spec, w, grid.point(i, j));
  }
  const auto best = std::min_element(lj.begin(), lj.end());
  double min_lj = *best;
  const int bi = static_cast<int>(cells[best - lj.begin()] % grid_n);
  const int bj = static_cast<int>(cells[best - lj.begin()] / grid_n);
  constexpr int sub = 4;
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj)
      for (int a = 0; a < sub; ++a)
        for (int b = 0; b < sub; ++b) {
          const TorusPoint p = wrap((bi + di + (a + 0.5) / sub) / grid_n,
                                    (bj + dj + (b + 0.5) / sub) / grid_n);
          if (!word_set_contains(spec, part, w, p)) continue;
          min_lj = std::min(min_lj, word_log_jacobian_at(spec, w, p));
        }
  r.value = std::exp(min_lj);
  return r;
}

EhrenfestTime local_ehrenfest_time(const AnosovMapSpec& spec, const Partition& part,
                                   const Word& w, double h, double threshold_exponent,
                                   int grid_n) {
  if (!(h > 0 && h < 1)) throw InputError("h must lie in (0,1)");
  const double threshold = std::pow(h, -threshold_exponent);
  EhrenfestTime r;
  for (std::size_t m = 1; m <= w.size(); ++m) {
    Word prefix = w;
    prefix.letters.resize(m);
    const WordJacobian j = word_jacobian(spec, part, prefix, grid_n);
    if (j.empty) {
      r.status = EhrenfestTime::Status::EmptySet;
      r.m = static_cast<int>(m);
      return r;
    }
    if (j.value >= threshold) {
      r.status = EhrenfestTime::Status::Found;
      r.m = static_cast<int>(m);
      return r;
    }
  }
  r.status = EhrenfestTime::Status::ExceedsWord;
  r.m = static_cast<int>(w.size());
  return r;
}

namespace {

struct Tracked {
  std::size_t cell;
  TorusPoint z;  // grid point
  TorusPoint y;  // phi_{-n}(z) for the current prefix length n
};

struct MwSearch {
  const AnosovMapSpec& spec;
  const Partition& part;
  const Word& coarse;
  const ModerateWordsOptions& opt;
  Grid2 grid;
  double log_threshold;
  ModerateWords out;
  std::size_t visited = 0;
  TorusPoint base;
  Eigen::Vector2d base_dir;

  double inf_log_jacobian(const std::vector<Tracked>& pts, int n) const {
    double best = std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : best) schedule(dynamic, 64)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(pts.size()); ++k)
      best = std::min(best, log_jacobian(spec, pts[k].z, -n, Bundle::Stable));
    return best;
  }

  // Same convention as transverse_coordinate, relative to the common base point.
  double transverse_offset(const std::vector<Tracked>& pts) const {
    Eigen::Vector2d best_d = torus_delta(base, pts.front().z);
    for (const auto& t : pts) {
      const Eigen::Vector2d d = torus_delta(base, t.z);
      if (d.squaredNorm() < best_d.squaredNorm()) best_d = d;
    }
    return best_d(0) * -base_dir(1) + best_d(1) * base_dir(0);
  }

  void visit(Word& prefix, const std::vector<Tracked>& pts) {
    if (++visited > opt.max_words) throw ResourceError("moderate_words: enumeration limit reached");
    if (pts.empty()) {
      out.empty_words.push_back(prefix);
      return;
    }
    const int n = static_cast<int>(prefix.size());
    const double lj = inf_log_jacobian(pts, n);
    if (lj >= log_threshold) {
      out.words.push_back({prefix, std::exp(lj), transverse_offset(pts)});
      return;
    }
    if (prefix.size() == coarse.size()) {
      out.unfinished.push_back(prefix);
      return;
    }
    const int c = coarse.letters[prefix.size()];
    std::vector<int> next;
    if (c == 1)
      next = {1};
    else
      for (int q = 2; q <= part.refined_size(); ++q) next.push_back(q);
    for (int q : next) {
      std::vector<Tracked> child;
      for (const auto& t : pts) {
        const TorusPoint y = step_backward(spec, t.y);
        if (part.contains(Alphabet::Refined, q, y)) child.push_back({t.cell, t.z, y});
      }
      prefix.letters.push_back(q);
      visit(prefix, child);
      prefix.letters.pop_back();
    }
  }
};

}  // namespace

ModerateWords moderate_words(const AnosovMapSpec& spec, const Partition& part, const Word& coarse,
                             int first, double h, int big_lambda, const ModerateWordsOptions& opt) {
  if (coarse.alphabet != Alphabet::Coarse || coarse.size() == 0)
    throw InputError("moderate_words: need a nonempty coarse word");
  if (!(h > 0 && h < 1)) throw InputError("h must lie in (0,1)");
  if (big_lambda < 1) throw InputError("Lambda must be >= 1");
  part.check_letter(Alphabet::Refined, first);
  const bool compatible = coarse.letters[0] == 1 ? first == 1 : first >= 2;
  if (!compatible) throw InputError("moderate_words: first letter not dominated by the coarse word");

  MwSearch search{spec, part, coarse, opt, Grid2{opt.grid_n}, 0.0, {}, 0, {}, {}};
  search.out.tau = 1.0 - 1.0 / (10.0 * big_lambda);
  search.out.threshold = std::pow(h, -search.out.tau);
  search.log_threshold = std::log(search.out.threshold);

  std::vector<Tracked> pts;
  for (int j = 0; j < opt.grid_n; ++j)
    for (int i = 0; i < opt.grid_n; ++i) {
      const TorusPoint z = search.grid.point(i, j);
      const TorusPoint y = step_backward(spec, z);
      if (part.contains(Alphabet::Refined, first, y)) pts.push_back({search.grid.index(i, j), z, y});
    }
  if (!pts.empty()) {
    search.base = pts.front().z;
    search.base_dir = unstable_direction(spec, search.base).direction;
  }
  Word prefix{Alphabet::Refined, {first}, Orientation::Past};
  search.visit(prefix, pts);
  return std::move(search.out);
}

double transverse_coordinate(const AnosovMapSpec& spec, const Mask& set, const TorusPoint& base) {
  double best = std::numeric_limits<double>::infinity();
  Eigen::Vector2d best_d(0, 0);
  const int n = set.grid.n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!set.at(i, j)) continue;
      const Eigen::Vector2d d = torus_delta(base, set.grid.point(i, j));
      if (d.squaredNorm() < best) {
        best = d.squaredNorm();
        best_d = d;
      }
    }
  if (!std::isfinite(best)) throw InputError("transverse_coordinate: empty set");
  const Eigen::Vector2d e = unstable_direction(spec, base).direction;
  return best_d(0) * -e(1) + best_d(1) * e(0);
}

std::vector<Cluster> cluster_partition(const std::vector<ClusterItem>& items, double h) {
  if (!(h > 0)) throw InputError("h must be positive");
  const double s = std::pow(h, 2.0 / 3.0);
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return items[a].word.letters < items[b].word.letters;
  });
  std::vector<Cluster> clusters;
  for (std::size_t idx : order) {
    bool placed = false;
    for (auto& c : clusters)
      if (std::abs(items[idx].z - c.center) <= s) {
        c.members.push_back(idx);
        placed = true;
        break;
      }
    if (!placed) clusters.push_back({items[idx].z, {idx}});
  }
  return clusters;
}

int max_overlapping_clusters(const std::vector<ClusterItem>& items,
                             const std::vector<Cluster>& clusters, double h) {
  const double s = std::pow(h, 2.0 / 3.0);
  auto touching = [&](const Cluster& a, const Cluster& b) {
    for (std::size_t i : a.members)
      for (std::size_t j : b.members)
        if (std::abs(items[i].z - items[j].z) <= 2 * s) return true;
    return false;
  };
  int worst = 0;
  for (const auto& a : clusters) {
    int c = 0;
    for (const auto& b : clusters) c += touching(a, b) ? 1 : 0;
    worst = std::max(worst, c);
  }
  return worst;
}

}  // namespace fuplab
