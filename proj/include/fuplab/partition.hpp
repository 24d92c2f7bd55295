#pragma once

#include <cstdint>
#include <vector>

#include "fuplab/dynamics.hpp"

namespace fuplab {

// Smoothed indicator of a geodesic ball on the torus: equal to amplitude for
// |z - c| <= radius - width/2, zero for |z - c| >= radius + width/2.
struct BallBump {
  TorusPoint center{0.5, 0.5};
  double radius = 0.2;
  double width = 0.1;
  double amplitude = 1.0;

  double inner() const { return radius - 0.5 * width; }
  double outer() const { return radius + 0.5 * width; }
  double operator()(double x, double xi) const;
  // Open support {value > 0}.
  bool in_support(const TorusPoint& p) const;
  Symbol symbol() const;
};

enum class Alphabet { Coarse, Refined };
inline constexpr int kStar = 0;  // the coarse letter for a_star; coarse letter 1 is a_1

// a_1 is a ball bump around the hole; a_star = 1 - a_1 is split into refined
// letters 2..Q supported in balls of radius eps0/2.
class Partition {
 public:
  struct Options {
    TorusPoint hole_center{0.5, 0.5};
    double hole_radius = 0.2;
    double transition = 0.1;
    double eps0 = 0.2;
  };

  explicit Partition(const Options& opt);
  Partition() : Partition(Options{}) {}

  const Options& options() const { return opt_; }
  const BallBump& hole() const { return hole_; }

  // Q: letter 1 plus the refined letters 2..Q.
  int refined_size() const { return 1 + static_cast<int>(centers_.size()); }
  const std::vector<TorusPoint>& refined_centers() const { return centers_; }

  double a1(double x, double xi) const { return hole_(x, xi); }
  double a_star(double x, double xi) const { return 1.0 - hole_(x, xi); }

  double symbol(Alphabet alph, int letter, double x, double xi) const;
  // Membership in the open set V_letter = {a_letter > 0}.
  bool contains(Alphabet alph, int letter, const TorusPoint& p) const;
  Symbol letter_symbol(Alphabet alph, int letter) const;
  std::vector<int> letters(Alphabet alph) const;
  void check_letter(Alphabet alph, int letter) const;

 private:
  double refined_weight(int index, double x, double xi) const;
  double refined_total(double x, double xi) const;

  Options opt_;
  BallBump hole_;
  std::vector<TorusPoint> centers_;
  double bump_inner_ = 0.0;
  double bump_outer_ = 0.0;
};

// Cell-centred square grid on the torus: point (i, j) = ((i+1/2)/n, (j+1/2)/n),
// i indexes x, j indexes xi; storage index j * n + i.
struct Grid2 {
  int n = 256;
  TorusPoint point(int i, int j) const { return {(i + 0.5) / n, (j + 0.5) / n}; }
  std::size_t size() const { return static_cast<std::size_t>(n) * n; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n + i; }
};

struct Mask {
  Grid2 grid;
  std::vector<std::uint8_t> cells;

  bool at(int i, int j) const { return cells[grid.index(i, j)] != 0; }
  // Nearest-cell lookup with periodic wrap.
  bool contains(const TorusPoint& p) const;
  std::size_t count() const;
  double area() const { return static_cast<double>(count()) / grid.size(); }
};

}  // namespace fuplab
