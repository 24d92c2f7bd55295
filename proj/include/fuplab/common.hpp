#pragma once

#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fuplab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

using cdouble = std::complex<double>;

// Real phase-space function on the torus, arguments in [0,1)^2.
using Symbol = std::function<double(double x, double xi)>;

// Bad user input: malformed config, violated preconditions, out-of-range parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical routine failed to reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A request would exceed the memory/size guard.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Returns v reduced into [0,1).
double wrap_unit(double v);

// Smooth step: 0 for t <= 0, 1 for t >= 1, C-infinity in between.
double smooth_step(double t);

// 1 for r <= r_in, 0 for r >= r_out, smooth and monotone in between.
double plateau(double r, double r_in, double r_out);

// Set OpenMP thread count; n <= 0 leaves the runtime default.
void set_threads(int n);
int max_threads();

}  // namespace fuplab
