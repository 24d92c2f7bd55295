#include "fuplab/common.hpp"

#include <omp.h>

#include <cmath>

namespace fuplab {

double wrap_unit(double v) {
  double r = v - std::floor(v);
  // floor can leave r == 1.0 for tiny negative v
  return r >= 1.0 ? 0.0 : r;
}

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double plateau(double r, double r_in, double r_out) {
  if (r <= r_in) return 1.0;
  if (r >= r_out) return 0.0;
  return smooth_step((r_out - r) / (r_out - r_in));
}

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace fuplab
