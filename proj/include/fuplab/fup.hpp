#pragma once

#include <vector>

#include "fuplab/linalg.hpp"
#include "fuplab/porosity.hpp"

namespace fuplab {

// Discrete unitary version of F_h f(xi) = (2 pi h)^{-1/2} int e^{-i x xi / h} f(x) dx on
// x_j = -L + j dx, dx = 2L/M, and xi_k = -Xi + k dxi, dxi = 2 pi h / (M dx), Xi = M dxi / 2.
class SemiclassicalFourier {
 public:
  SemiclassicalFourier(double h, double L, int M);

  double h() const { return h_; }
  double half_width() const { return L_; }
  int size() const { return M_; }
  double dx() const { return dx_; }
  double dxi() const { return dxi_; }
  double x(int j) const { return -L_ + j * dx_; }
  double xi(int k) const { return -xi_max_ + k * dxi_; }

  CMatrix dense() const;
  // FFT application, O(M log M).
  CVector apply(const CVector& f) const;
  CVector apply_inverse(const CVector& g) const;

  // Smallest admissible power-of-two M: M >= 8 (2L)^2 / (2 pi h).
  static int nyquist_size(double h, double L);

 private:
  double h_, L_;
  int M_;
  double dx_, dxi_, xi_max_;
};

// Checks the Nyquist rule and the dense size guard, then builds the transform.
SemiclassicalFourier semiclassical_ft(double h, double L, int M);

enum class FupMethod {
  Gauss,  // Gauss-Legendre Nystrom on each interval (default)
  Grid,   // cell-centre restriction of the discrete transform
};

struct FupOptions {
  FupMethod method = FupMethod::Gauss;
  double nodes_per_phase = 2.0;  // Gauss: nodes per interval = ceil(q (1 + |I| R / h))
  double tolerance = 1e-4;       // convergence budget between successive refinements
  int max_refinements = 3;
  double window = 0.0;           // Grid: half-width L (0 = automatic)
  int grid_points = 0;           // Grid: M (0 = Nyquist size)
};

struct FupResult {
  double norm = 0.0;
  double volume_bound = 0.0;  // sqrt(|Omega-| |Omega+| / (2 pi h))
  std::size_t rows = 0;
  std::size_t cols = 0;
  double delta = 0.0;  // change over the last refinement
  bool converged = true;
};

// || 1_{Omega-} F_h 1_{Omega+} ||, Omega+ in position, Omega- in frequency.
FupResult fup_norm(double h, const IntervalSet& omega_minus, const IntervalSet& omega_plus,
                   const FupOptions& opt = {});

struct BetaFit {
  double beta = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int excluded = 0;  // zero norms dropped from the fit
};
// Slope of -log(norm) against log(1/h).
BetaFit fit_beta(const std::vector<double>& hs, const std::vector<double>& norms);

struct GammaExponents {
  double g0_plus = 1.0, g1_plus = 0.0;
  double g0_minus = 1.0, g1_minus = 0.0;
};

struct Rescaled {
  IntervalSet omega_minus;
  IntervalSet omega_plus;
  double h_tilde = 0.0;
  double gamma0 = 1.0;
  double gamma1 = 0.0;
  double gamma = 1.0;
};

Rescaled window_rescale(const IntervalSet& omega_minus, const IntervalSet& omega_plus, double h,
                        const GammaExponents& g);

// chi = 1_{Omega(h/2)} * rho_{h/2}: equals 1 on Omega, supported in Omega(h).
class SmoothCutoff {
 public:
  SmoothCutoff(const IntervalSet& omega, double h);
  double operator()(double x) const;
  const IntervalSet& support() const { return support_; }
  const IntervalSet& core() const { return fattened_; }
  double h() const { return h_; }

 private:
  IntervalSet fattened_;
  IntervalSet support_;
  double h_;
};

inline SmoothCutoff smooth_cutoff(const IntervalSet& omega, double h) { return {omega, h}; }

// || chi_- F_h chi_+ || with the same Nystrom scheme, transition zones on their own panels.
FupResult fup_norm_smoothed(double h, const SmoothCutoff& chi_minus, const SmoothCutoff& chi_plus,
                            const FupOptions& opt = {});

// exp(-exp(exp(K / nu^3))); underflows to 0 quickly, which is the point.
double beta_reference(double nu, double K);

}  // namespace fuplab
