#pragma once

// Thin FFTW wrappers. Planning goes through a mutex so callers may run inside
// OpenMP regions; execution itself is thread-safe.

#include "fuplab/common.hpp"

namespace fuplab::fft {

// In-place length-n DFT; sign -1 is e^{-2 pi i jk/n}, +1 is unnormalised inverse.
void inplace(cdouble* data, int n, int sign);

// `count` contiguous length-n transforms stored back to back (column-major columns).
void many(cdouble* data, int n, int count, int sign);

// In-place 2D DFT of a row-major rows x cols array.
void two_d(cdouble* data, int rows, int cols, int sign);

}  // namespace fuplab::fft
