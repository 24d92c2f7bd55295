#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace fuplab::fft {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void run(fftw_plan plan) {
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

int direction(int sign) { return sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD; }

}  // namespace

void inplace(cdouble* data, int n, int sign) {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, p, p, direction(sign), FFTW_ESTIMATE);
  }
  run(plan);
}

void many(cdouble* data, int n, int count, int sign) {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_many_dft(1, &n, count, p, nullptr, 1, n, p, nullptr, 1, n, direction(sign),
                              FFTW_ESTIMATE);
  }
  run(plan);
}

void two_d(cdouble* data, int rows, int cols, int sign) {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_2d(rows, cols, p, p, direction(sign), FFTW_ESTIMATE);
  }
  run(plan);
}

}  // namespace fuplab::fft
