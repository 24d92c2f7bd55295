#pragma once

// Hot loops with a serial reference and an OpenMP version. Both produce identical
// results; tests compare them and bench/ times them.

#include <cstdint>
#include <vector>

#include "fuplab/common.hpp"
#include "fuplab/dynamics.hpp"
#include "fuplab/partition.hpp"

namespace fuplab {
struct Word;
}

namespace fuplab::kernels {

enum class Exec { Serial, Parallel };

// values[j * n + i] = a(i/n + offset/n, j/n + offset/n)
std::vector<double> sample_symbol(const Symbol& a, int n, double offset, Exec exec);

std::vector<double> sample_word_symbol(const AnosovMapSpec& spec, const Partition& part,
                                       const Word& w, const Grid2& grid, Exec exec);
std::vector<std::uint8_t> sample_word_mask(const AnosovMapSpec& spec, const Partition& part,
                                           const Word& w, const Grid2& grid, Exec exec);

// y = K v with K_{ba} = c_b d_a exp(-i s_b t_a / h); the restricted Fourier kernel
// evaluated on the fly.
void fourier_kernel_apply(const std::vector<double>& s, const std::vector<double>& c,
                          const std::vector<double>& t, const std::vector<double>& d, double h,
                          const std::vector<cdouble>& v, std::vector<cdouble>& y, Exec exec);

// Smallest ratio (largest gap inside I) / |I| over intervals I = [a, a + len],
// a on a uniform grid of `positions` points spanning [lo, hi]. Brute-force oracle
// for porosity; intervals given as sorted disjoint (left, right) pairs.
double brute_force_gap_ratio(const std::vector<double>& lefts, const std::vector<double>& rights,
                             double len, double lo, double hi, int positions, Exec exec);

}  // namespace fuplab::kernels
