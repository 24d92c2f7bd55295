#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "fuplab/common.hpp"

namespace fuplab {

struct TorusPoint {
  double x = 0.0;
  double xi = 0.0;
};

TorusPoint wrap(double x, double xi);

// Minimal-image displacement to - from, components in [-1/2, 1/2).
Eigen::Vector2d torus_delta(const TorusPoint& from, const TorusPoint& to);
double torus_distance(const TorusPoint& a, const TorusPoint& b);

struct FourierTerm {
  int k = 1;
  double cos_coef = 0.0;
  double sin_coef = 0.0;
};

// Kick potential g(x) = sum_k c_k cos(2 pi k x) + s_k sin(2 pi k x).
// One step of the map shifts momentum by epsilon * g'(x).
class KickProfile {
 public:
  KickProfile() = default;
  explicit KickProfile(std::vector<FourierTerm> terms);

  // g(x) = sin(2 pi x) / (2 pi)^2, so |g''| <= 1.
  static KickProfile standard();

  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;
  const std::vector<FourierTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

 private:
  std::vector<FourierTerm> terms_;
};

using IntMatrix2 = Eigen::Matrix<std::int64_t, 2, 2>;

struct AnosovMapSpec {
  IntMatrix2 linear;
  double epsilon = 0.0;
  KickProfile kick;

  // [[2,1],[1,1]] with the standard kick.
  static AnosovMapSpec cat(double epsilon = 0.0);
};

// phi_1: z -> M z, then xi += epsilon g'(x), everything mod 1.
TorusPoint step_forward(const AnosovMapSpec& spec, const TorusPoint& p);
TorusPoint step_backward(const AnosovMapSpec& spec, const TorusPoint& p);
TorusPoint apply_map(const AnosovMapSpec& spec, TorusPoint p, int t);

// d phi_1 at p.
Eigen::Matrix2d step_differential(const AnosovMapSpec& spec, const TorusPoint& p);
// d phi_t at p (t may be negative). Plain product; loses the determinant for large |t|.
Eigen::Matrix2d tangent_cocycle(const AnosovMapSpec& spec, const TorusPoint& p, int t);
// det d phi_t computed through an orthogonal-triangular accumulation so it stays accurate.
double cocycle_determinant(const AnosovMapSpec& spec, const TorusPoint& p, int t);

struct AnosovVerdict {
  bool accepted = false;
  double expansion_factor = 0.0;  // spectral radius of the linear part
  double epsilon_max = 0.0;       // largest epsilon keeping the fixed cone field
  double margin = 0.0;            // epsilon_max - epsilon
  std::string reason;
};

// Checks that the cone around the linear unstable eigenline (aperture 1 in eigen
// coordinates) is mapped strictly inside itself and expanded, on a grid of samples.
AnosovVerdict verify_anosov(const AnosovMapSpec& spec, int samples = 512);

struct DirectionResult {
  Eigen::Vector2d direction;
  int depth = 0;
};

DirectionResult unstable_direction(const AnosovMapSpec& spec, const TorusPoint& p, int depth = 40);
DirectionResult stable_direction(const AnosovMapSpec& spec, const TorusPoint& p, int depth = 40);

// Angle between d phi_1 e(p) and e(phi_1 p); used as a convergence residual.
double direction_residual(const AnosovMapSpec& spec, const TorusPoint& p, bool unstable, int depth);

enum class Bundle { Unstable, Stable };

// log J_t(p) in the symplectically normalised metric: e_u, e_s rescaled so that
// omega(e_u, e_s) = 1, which makes J^u J^s = 1 along every orbit.
double log_jacobian(const AnosovMapSpec& spec, const TorusPoint& p, int t, Bundle bundle,
                    int depth = 40);

struct Jacobians {
  double unstable = 1.0;
  double stable = 1.0;
};
Jacobians jacobians(const AnosovMapSpec& spec, const TorusPoint& p, int t, int depth = 40);

struct ExpansionRates {
  double lambda0 = 0.0;  // after the safety margin
  double lambda1 = 0.0;
  double raw_lambda0 = 0.0;
  double raw_lambda1 = 0.0;
  int big_lambda = 1;  // ceil(lambda1 / lambda0)
  bool padded = false;
};

// Grid min/max of the one-step unstable log-Jacobian. With epsilon > 0 the rates are
// widened by 1% to cover off-grid points; with epsilon == 0 they are exact.
// pad_lambda1 forces lambda1 >= 1.
ExpansionRates estimate_expansion_rates(const AnosovMapSpec& spec, int grid_resolution = 256,
                                        bool pad_lambda1 = false);

struct PropagationTimes {
  int short_time = 0;  // N0 = ceil(log(1/h) / (6 lambda1))
  int long_time = 0;   // N = (6 Lambda + 1) N0
};
PropagationTimes propagation_times(double h, const ExpansionRates& rates);

}  // namespace fuplab
