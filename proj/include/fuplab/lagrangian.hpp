#pragma once

#include <vector>

#include "fuplab/common.hpp"

namespace fuplab {

// One-dimensional Lagrangian states u(x) = a(x) e^{i Phi(x) / h}.

struct Amplitude {
  enum class Kind {
    Gaussian,          // exp(-(x-c)^2 / 2 s^2), cut at |x-c| = cutoff * s
    WindowedGaussian,  // Gaussian times a plateau from inner * s to cutoff * s
    Plateau,           // plateau(|x-c|; inner * s, cutoff * s)
  };
  Kind kind = Kind::WindowedGaussian;
  double center = 0.0;
  double scale = 1.0;   // s
  double inner = 9.0;
  double cutoff = 10.0;

  double operator()(double x) const;
  double support_lo() const { return center - cutoff * scale; }
  double support_hi() const { return center + cutoff * scale; }
  // Shortest length scale of the envelope, used for the resolution rule.
  double resolution_scale() const;
};

struct Phase {
  enum class Kind {
    Zero,
    Linear,  // xi0 (x - c)
    Sine,    // h' A l sin((x - c) / l)
    Cosine,  // h' A l (1 - cos((x - c) / l))
  };
  Kind kind = Kind::Zero;
  double center = 0.0;
  double xi0 = 0.0;
  double amplitude = 1.0;  // A
  double length = 1.0;     // l

  // Phi, Phi', Phi'' for the given h'.
  double value(double x, double hprime) const;
  double d1(double x, double hprime) const;
  double d2(double x, double hprime) const;
};

struct LagrangianSpec {
  double h = 1e-3;
  double hprime = 1.0;
  Amplitude amplitude;
  Phase phase;
  double domain_margin = 1.0;      // dist(K, R \ U)
  double samples_per_period = 8;   // per period of max|Phi'| / h and per envelope scale
  double dx = 0.0;                 // 0 = derived from the resolution rule
};

struct GradientRange {
  double lo = 0.0;
  double hi = 0.0;
  double diameter() const { return hi - lo; }
};

struct LagrangianState {
  LagrangianSpec spec;
  double x0 = 0.0;  // grid x_j = x0 + j dx over U
  double dx = 0.0;
  std::vector<cdouble> u;
  double amplitude_norm = 0.0;  // ||a||_{L^2} by the same rule
  double state_norm = 0.0;
  double u_lo = 0.0, u_hi = 0.0;  // U
  GradientRange omega;           // Omega_Phi with margin
  double c0 = 0.0;               // max(vol K, 1 / dist(K, dU), diam Omega / h')
};

// Samples u on a grid over U; throws if an explicit dx under-resolves.
LagrangianState build_state(const LagrangianSpec& spec);

// Bounding box of sampled Phi' over U widened by two cells of Phi'' variation.
GradientRange gradient_range(const LagrangianSpec& spec, double u_lo, double u_hi, double dx);

// || 1_{R \ Omega(radius)}(hD) u ||, Omega(radius) = [lo - radius, hi + radius].
double outside_mass(const LagrangianState& state, double radius);
// Same for an explicit frequency window [lo, hi].
double outside_mass_window(const LagrangianState& state, double lo, double hi);

// u is Gaussian with s = 1 and Phi = 0 or linear: the squared mass outside
// [c - m, c + m] is sqrt(pi) erfc(m / h).
double gaussian_outside_mass(double h, double m);

struct LagrangianFamily {
  double tau = 0.8;
  double hprime_coef = 1.0;  // h' = coef * h^tau
  Amplitude amplitude;
  Phase phase;
  double domain_margin = 1.0;
};

// A natural tau family: windowed Gaussian centred where Phi' vanishes and
// Phi = h' l (1 - cos(x / l)), with U wide enough for Phi' to sweep [-h', h'].
LagrangianFamily default_family(double tau = 0.8);

struct LagrangianRow {
  double h = 0.0;
  double hprime = 0.0;
  double c0 = 0.0;
  double outside_mass = 0.0;
  double slope_partial = 0.0;  // fit over rows so far (0 until two rows)
};

struct LagrangianScan {
  std::vector<LagrangianRow> rows;
  double slope = 0.0;  // of log(outside mass) against log(1/h), sign flipped
  double r2 = 0.0;
};

LagrangianScan lagrangian_scan(const LagrangianFamily& family, const std::vector<double>& hs);

}  // namespace fuplab
