#include "fuplab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fuplab/words.hpp"

namespace fuplab::kernels {

namespace {

template <class F>
void for_each_index(std::ptrdiff_t count, Exec exec, F&& body) {
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < count; ++k) body(k);
  } else {
    for (std::ptrdiff_t k = 0; k < count; ++k) body(k);
  }
}

}  // namespace

std::vector<double> sample_symbol(const Symbol& a, int n, double offset, Exec exec) {
  std::vector<double> out(static_cast<std::size_t>(n) * n);
  for_each_index(static_cast<std::ptrdiff_t>(out.size()), exec, [&](std::ptrdiff_t k) {
    const int i = static_cast<int>(k % n), j = static_cast<int>(k / n);
    out[k] = a((i + offset) / n, (j + offset) / n);
  });
  return out;
}

std::vector<double> sample_word_symbol(const AnosovMapSpec& spec, const Partition& part,
                                       const Word& w, const Grid2& grid, Exec exec) {
  std::vector<double> out(grid.size());
  const int n = grid.n;
  for_each_index(static_cast<std::ptrdiff_t>(out.size()), exec, [&](std::ptrdiff_t k) {
    out[k] = word_symbol_at(spec, part, w, grid.point(static_cast<int>(k % n), static_cast<int>(k / n)));
  });
  return out;
}

std::vector<std::uint8_t> sample_word_mask(const AnosovMapSpec& spec, const Partition& part,
                                           const Word& w, const Grid2& grid, Exec exec) {
  std::vector<std::uint8_t> out(grid.size());
  const int n = grid.n;
  for_each_index(static_cast<std::ptrdiff_t>(out.size()), exec, [&](std::ptrdiff_t k) {
    out[k] = word_set_contains(spec, part, w, grid.point(static_cast<int>(k % n), static_cast<int>(k / n)));
  });
  return out;
}

void fourier_kernel_apply(const std::vector<double>& s, const std::vector<double>& c,
                          const std::vector<double>& t, const std::vector<double>& d, double h,
                          const std::vector<cdouble>& v, std::vector<cdouble>& y, Exec exec) {
  y.assign(s.size(), cdouble(0.0, 0.0));
  std::vector<cdouble> dv(t.size());
  for (std::size_t a = 0; a < t.size(); ++a) dv[a] = d[a] * v[a];
  for_each_index(static_cast<std::ptrdiff_t>(s.size()), exec, [&](std::ptrdiff_t b) {
    double re = 0.0, im = 0.0;
    const double sb = s[b] / h;
    for (std::size_t a = 0; a < t.size(); ++a) {
      const double ph = -sb * t[a];
      const double cs = std::cos(ph), sn = std::sin(ph);
      re += cs * dv[a].real() - sn * dv[a].imag();
      im += cs * dv[a].imag() + sn * dv[a].real();
    }
    y[b] = c[b] * cdouble(re, im);
  });
}

namespace {

double largest_gap_in(const std::vector<double>& lefts, const std::vector<double>& rights,
                      double a, double b) {
  // complement components: (-inf, l0), (r0, l1), ..., (r_last, inf)
  const std::size_t m = lefts.size();
  if (m == 0) return b - a;
  double best = 0.0;
  auto take = [&](double p, double q) { best = std::max(best, std::min(q, b) - std::max(p, a)); };
  take(-std::numeric_limits<double>::infinity(), lefts[0]);
  for (std::size_t i = 0; i + 1 < m; ++i) take(rights[i], lefts[i + 1]);
  take(rights[m - 1], std::numeric_limits<double>::infinity());
  return best;
}

}  // namespace

double brute_force_gap_ratio(const std::vector<double>& lefts, const std::vector<double>& rights,
                             double len, double lo, double hi, int positions, Exec exec) {
  std::vector<double> ratio(positions);
  for_each_index(positions, exec, [&](std::ptrdiff_t k) {
    const double a = positions == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / (positions - 1);
    ratio[k] = largest_gap_in(lefts, rights, a, a + len) / len;
  });
  return *std::min_element(ratio.begin(), ratio.end());
}

}  // namespace fuplab::kernels
