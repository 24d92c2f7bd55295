#include "fuplab/partition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fuplab {

double BallBump::operator()(double x, double xi) const {
  return amplitude * plateau(torus_distance({x, xi}, center), inner(), outer());
}

bool BallBump::in_support(const TorusPoint& p) const {
  return amplitude != 0.0 && torus_distance(p, center) < outer();
}

Symbol BallBump::symbol() const {
  BallBump b = *this;
  return [b](double x, double xi) { return b(x, xi); };
}

Partition::Partition(const Options& opt) : opt_(opt) {
  if (!(opt.hole_radius > 0) || !(opt.transition > 0) || opt.transition >= 2 * opt.hole_radius)
    throw InputError("partition: need hole_radius > 0 and 0 < transition < 2 hole_radius");
  if (opt.hole_radius + 0.5 * opt.transition >= 0.5)
    throw InputError("partition: hole does not fit on the torus");
  if (!(opt.eps0 > 0) || opt.eps0 > 1.0) throw InputError("partition: eps0 must lie in (0,1]");
  hole_ = BallBump{opt.hole_center, opt.hole_radius, opt.transition, 1.0};

  // Smallest k with a k x k lattice whose eps0/2-balls cover the torus.
  const int k = static_cast<int>(std::floor(std::sqrt(2.0) / opt.eps0)) + 1;
  bump_outer_ = 0.5 * opt.eps0;
  bump_inner_ = 0.25 * opt.eps0;
  const double core = hole_.inner();
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) {
      TorusPoint c{(i + 0.5) / k, (j + 0.5) / k};
      // a_star vanishes on the core, so balls inside it carry nothing
      if (torus_distance(c, hole_.center) + bump_outer_ <= core) continue;
      centers_.push_back(c);
    }
}

double Partition::refined_weight(int index, double x, double xi) const {
  return plateau(torus_distance({x, xi}, centers_[index]), bump_inner_, bump_outer_);
}

double Partition::refined_total(double x, double xi) const {
  double s = 0.0;
  for (std::size_t q = 0; q < centers_.size(); ++q) s += refined_weight(static_cast<int>(q), x, xi);
  return s;
}

void Partition::check_letter(Alphabet alph, int letter) const {
  const bool ok = alph == Alphabet::Coarse ? (letter == 1 || letter == kStar)
                                           : (letter >= 1 && letter <= refined_size());
  if (!ok) throw InputError("unknown letter " + std::to_string(letter));
}

double Partition::symbol(Alphabet alph, int letter, double x, double xi) const {
  if (letter == 1) return a1(x, xi);
  if (alph == Alphabet::Coarse) return a_star(x, xi);
  const double as = a_star(x, xi);
  if (as == 0.0) return 0.0;
  const double w = refined_weight(letter - 2, x, xi);
  if (w == 0.0) return 0.0;
  return as * w / refined_total(x, xi);
}

bool Partition::contains(Alphabet alph, int letter, const TorusPoint& p) const {
  if (letter == 1) return hole_.in_support(p);
  const bool in_star = torus_distance(p, hole_.center) > hole_.inner();
  if (alph == Alphabet::Coarse) return in_star;
  return in_star && torus_distance(p, centers_[letter - 2]) < bump_outer_;
}

Symbol Partition::letter_symbol(Alphabet alph, int letter) const {
  check_letter(alph, letter);
  return [self = *this, alph, letter](double x, double xi) { return self.symbol(alph, letter, x, xi); };
}

std::vector<int> Partition::letters(Alphabet alph) const {
  if (alph == Alphabet::Coarse) return {1, kStar};
  std::vector<int> out(refined_size());
  for (int q = 0; q < refined_size(); ++q) out[q] = q + 1;
  return out;
}

bool Mask::contains(const TorusPoint& p) const {
  const int n = grid.n;
  int i = static_cast<int>(std::floor(wrap_unit(p.x) * n));
  int j = static_cast<int>(std::floor(wrap_unit(p.xi) * n));
  i = std::clamp(i, 0, n - 1);
  j = std::clamp(j, 0, n - 1);
  return at(i, j);
}

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](auto c) { return c != 0; }));
}

}  // namespace fuplab
