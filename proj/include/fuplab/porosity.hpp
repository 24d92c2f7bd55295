#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fuplab/dynamics.hpp"
#include "fuplab/partition.hpp"
#include "fuplab/words.hpp"

namespace fuplab {

struct Interval {
  double left = 0.0;
  double right = 0.0;
  double length() const { return right - left; }
};

// Finite union of closed intervals, kept sorted with overlapping or touching pieces merged.
class IntervalSet {
 public:
  IntervalSet() = default;
  static IntervalSet from_intervals(std::vector<Interval> pieces);
  // k-th iterate of the base-M Cantor construction on [0,1] keeping `digits`.
  static IntervalSet cantor(int base, const std::vector<int>& digits, int k);
  static IntervalSet middle_thirds(int k) { return cantor(3, {0, 2}, k); }

  const std::vector<Interval>& intervals() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  std::size_t size() const { return pieces_.size(); }
  double measure() const;
  Interval hull() const;
  bool contains(double x) const;

  IntervalSet scaled(double c) const;
  IntervalSet shifted(double d) const;
  // Omega(r) = Omega + [-r, r].
  IntervalSet fattened(double r) const;

 private:
  std::vector<Interval> pieces_;
};

inline IntervalSet fatten(const IntervalSet& s, double r) { return s.fattened(r); }

struct ScaleWindow {
  double lo = 0.0;  // alpha_0
  double hi = 1.0;  // alpha_1
};

struct PorosityCheck {
  bool porous = true;
  std::optional<Interval> witness;  // an interval with no gap of length nu |I| when not porous
};

// Exact decision: every interval I with |I| in [lo, hi] contains an open subinterval of
// length nu |I| avoiding the set (the unbounded complement counts as a gap).
PorosityCheck check_porosity(const IntervalSet& set, double nu, const ScaleWindow& window);
inline bool is_porous(const IntervalSet& set, double nu, const ScaleWindow& window) {
  return check_porosity(set, nu, window).porous;
}

// Length of the longest piece of I not meeting the set.
double largest_gap_in(const IntervalSet& set, const Interval& I);

struct PorosityReport {
  double nu_star = 0.0;
  ScaleWindow window;
  std::optional<Interval> witness;  // failing interval just above nu_star
};

// Largest nu (to `tol`) for which the set is nu-porous on the window; capped at 1 - tol.
PorosityReport porosity_report(const IntervalSet& set, const ScaleWindow& window, double tol = 1e-4);

struct ProfileRow {
  double scale = 0.0;
  double nu_star = 0.0;
};
// nu_star of each single-scale window [s, s].
std::vector<ProfileRow> porosity_profile(const IntervalSet& set, const std::vector<double>& scales,
                                         double tol = 1e-4);

// A monotone C^2 map with derivatives; bounds are sampled on an interval.
struct MonotoneMap {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;
};

struct MapBounds {
  double c1 = 1.0;  // max(sup|f'|, sup 1/|f'|, sup|f''|)
  bool monotone = true;
};
MapBounds map_bounds(const MonotoneMap& psi, const Interval& domain, int samples = 4096);

IntervalSet map_image(const IntervalSet& set, const MonotoneMap& psi);

// Straight segment gamma(s) = base + s * direction, s in [0, length], wrapped to the torus.
struct TorusLine {
  TorusPoint base;
  Eigen::Vector2d direction{1.0, 0.0};
  double length = 1.0;
};

// Parameter set {s : gamma(s) in V_w} sampled at `resolution` points and refined by
// bisection at each membership change.
IntervalSet dynamical_trace(const AnosovMapSpec& spec, const Partition& part, const Word& w,
                            const TorusLine& line, int resolution = 20000);

// Every segment of length l0 along the direction field contains a parameter window of
// length l1 lying in the interior of the mask. Segments start on a base x base grid.
bool density_check(const AnosovMapSpec& spec, const Mask& set, double l0, double l1, Bundle field,
                   int base = 32, int samples_per_unit = 2048);

}  // namespace fuplab
