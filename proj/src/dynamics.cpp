#include "fuplab/dynamics.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace fuplab {

TorusPoint wrap(double x, double xi) { return {wrap_unit(x), wrap_unit(xi)}; }

Eigen::Vector2d torus_delta(const TorusPoint& from, const TorusPoint& to) {
  auto d = [](double a, double b) {
    double v = b - a;
    v -= std::floor(v + 0.5);
    return v;
  };
  return {d(from.x, to.x), d(from.xi, to.xi)};
}

double torus_distance(const TorusPoint& a, const TorusPoint& b) {
  return torus_delta(a, b).norm();
}

KickProfile::KickProfile(std::vector<FourierTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_)
    if (t.k <= 0) throw InputError("kick profile: Fourier modes must have k >= 1");
}

KickProfile KickProfile::standard() { return KickProfile({{1, 0.0, 1.0 / (kTwoPi * kTwoPi)}}); }

double KickProfile::value(double x) const {
  double s = 0.0;
  for (const auto& t : terms_) {
    const double a = kTwoPi * t.k * x;
    s += t.cos_coef * std::cos(a) + t.sin_coef * std::sin(a);
  }
  return s;
}

double KickProfile::d1(double x) const {
  double s = 0.0;
  for (const auto& t : terms_) {
    const double w = kTwoPi * t.k;
    s += w * (-t.cos_coef * std::sin(w * x) + t.sin_coef * std::cos(w * x));
  }
  return s;
}

double KickProfile::d2(double x) const {
  double s = 0.0;
  for (const auto& t : terms_) {
    const double w = kTwoPi * t.k;
    s += -w * w * (t.cos_coef * std::cos(w * x) + t.sin_coef * std::sin(w * x));
  }
  return s;
}

AnosovMapSpec AnosovMapSpec::cat(double epsilon) {
  AnosovMapSpec s;
  s.linear << 2, 1, 1, 1;
  s.epsilon = epsilon;
  s.kick = KickProfile::standard();
  return s;
}

namespace {

bool has_kick(const AnosovMapSpec& s) { return s.epsilon != 0.0 && !s.kick.empty(); }

// Integer inverse of a determinant-one matrix.
IntMatrix2 inverse_linear(const IntMatrix2& m) {
  IntMatrix2 r;
  r << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return r;
}

Eigen::Matrix2d as_double(const IntMatrix2& m) { return m.cast<double>(); }

}  // namespace

TorusPoint step_forward(const AnosovMapSpec& s, const TorusPoint& p) {
  const auto& m = s.linear;
  double x = wrap_unit(static_cast<double>(m(0, 0)) * p.x + static_cast<double>(m(0, 1)) * p.xi);
  double xi = wrap_unit(static_cast<double>(m(1, 0)) * p.x + static_cast<double>(m(1, 1)) * p.xi);
  if (has_kick(s)) xi = wrap_unit(xi + s.epsilon * s.kick.d1(x));
  return {x, xi};
}

TorusPoint step_backward(const AnosovMapSpec& s, const TorusPoint& p) {
  double xi = p.xi;
  if (has_kick(s)) xi = wrap_unit(xi - s.epsilon * s.kick.d1(p.x));
  const IntMatrix2 mi = inverse_linear(s.linear);
  return {wrap_unit(static_cast<double>(mi(0, 0)) * p.x + static_cast<double>(mi(0, 1)) * xi),
          wrap_unit(static_cast<double>(mi(1, 0)) * p.x + static_cast<double>(mi(1, 1)) * xi)};
}

TorusPoint apply_map(const AnosovMapSpec& s, TorusPoint p, int t) {
  if (t >= 0)
    for (int i = 0; i < t; ++i) p = step_forward(s, p);
  else
    for (int i = 0; i < -t; ++i) p = step_backward(s, p);
  return p;
}

Eigen::Matrix2d step_differential(const AnosovMapSpec& s, const TorusPoint& p) {
  Eigen::Matrix2d m = as_double(s.linear);
  if (!has_kick(s)) return m;
  const double x1 = wrap_unit(m(0, 0) * p.x + m(0, 1) * p.xi);
  Eigen::Matrix2d k;
  k << 1.0, 0.0, s.epsilon * s.kick.d2(x1), 1.0;
  return k * m;
}

namespace {

Eigen::Matrix2d inverse2(const Eigen::Matrix2d& a) {
  const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  Eigen::Matrix2d r;
  r << a(1, 1), -a(0, 1), -a(1, 0), a(0, 0);
  return r / det;
}

// d phi_{-1} at p.
Eigen::Matrix2d step_differential_inverse(const AnosovMapSpec& s, const TorusPoint& p) {
  return inverse2(step_differential(s, step_backward(s, p)));
}

}  // namespace

Eigen::Matrix2d tangent_cocycle(const AnosovMapSpec& s, const TorusPoint& p, int t) {
  Eigen::Matrix2d d = Eigen::Matrix2d::Identity();
  TorusPoint q = p;
  if (t >= 0) {
    for (int i = 0; i < t; ++i) {
      d = step_differential(s, q) * d;
      q = step_forward(s, q);
    }
  } else {
    for (int i = 0; i < -t; ++i) {
      d = step_differential_inverse(s, q) * d;
      q = step_backward(s, q);
    }
  }
  return d;
}

double cocycle_determinant(const AnosovMapSpec& s, const TorusPoint& p, int t) {
  // Keep an orthonormal frame Q and accumulate det of the triangular factors.
  Eigen::Matrix2d q = Eigen::Matrix2d::Identity();
  double log_abs = 0.0;
  int sign = 1;
  TorusPoint z = p;
  const int steps = std::abs(t);
  for (int i = 0; i < steps; ++i) {
    Eigen::Matrix2d d = t >= 0 ? step_differential(s, z) : step_differential_inverse(s, z);
    z = t >= 0 ? step_forward(s, z) : step_backward(s, z);
    Eigen::Matrix2d b = d * q;
    const double r11 = b.col(0).norm();
    Eigen::Vector2d q1 = b.col(0) / r11;
    Eigen::Vector2d q2(-q1(1), q1(0));
    const double r22 = q2.dot(b.col(1));
    log_abs += std::log(r11) + std::log(std::abs(r22));
    if (r22 < 0) sign = -sign;
    q.col(0) = q1;
    q.col(1) = q2;
  }
  return sign * std::exp(log_abs);
}

namespace {

struct ConeSetup {
  Eigen::Matrix2d p;      // columns: unstable, stable unit eigenvectors
  Eigen::Matrix2d p_inv;
  double lambda_u = 0.0;  // signed eigenvalues
  double lambda_s = 0.0;
};

ConeSetup cone_setup(const AnosovMapSpec& s) {
  const Eigen::Matrix2d m = as_double(s.linear);
  const double tr = m.trace();
  const double disc = std::sqrt(tr * tr - 4.0);
  ConeSetup c;
  c.lambda_u = tr > 0 ? (tr + disc) / 2 : (tr - disc) / 2;
  c.lambda_s = 1.0 / c.lambda_u;
  auto eigvec = [&](double l) {
    // (M - l I) v = 0; pick the better-conditioned row
    Eigen::Vector2d v;
    if (std::abs(m(0, 1)) > std::abs(m(1, 0)))
      v << m(0, 1), l - m(0, 0);
    else
      v << l - m(1, 1), m(1, 0);
    return Eigen::Vector2d(v.normalized());
  };
  c.p.col(0) = eigvec(c.lambda_u);
  c.p.col(1) = eigvec(c.lambda_s);
  c.p_inv = c.p.inverse();
  return c;
}

// Smallest slack of the cone conditions over the samples; positive means preserved.
double cone_slack(const AnosovMapSpec& s, const ConeSetup& c, double eps, int samples) {
  const Eigen::Matrix2d m = as_double(s.linear);
  constexpr double kappa = 1.0;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double x1 = (i + 0.5) / samples;
    Eigen::Matrix2d k;
    k << 1.0, 0.0, eps * s.kick.d2(x1), 1.0;
    const Eigen::Matrix2d d = c.p_inv * k * m * c.p;
    const Eigen::Vector2d lo = d * Eigen::Vector2d(1.0, -kappa);
    const Eigen::Vector2d hi = d * Eigen::Vector2d(1.0, kappa);
    if (lo(0) * hi(0) <= 0) return -1.0;
    for (const auto& v : {lo, hi}) {
      worst = std::min(worst, kappa * std::abs(v(0)) - std::abs(v(1)));
      worst = std::min(worst, std::abs(v(0)) - 1.0);
    }
  }
  return worst;
}

}  // namespace

AnosovVerdict verify_anosov(const AnosovMapSpec& s, int samples) {
  AnosovVerdict v;
  const std::int64_t det = s.linear(0, 0) * s.linear(1, 1) - s.linear(0, 1) * s.linear(1, 0);
  const std::int64_t tr = s.linear.trace();
  if (det != 1) {
    v.reason = "linear part must have determinant 1 (got " + std::to_string(det) + ")";
    return v;
  }
  if (std::abs(tr) <= 2) {
    v.reason = "linear part is not hyperbolic (|trace| <= 2)";
    return v;
  }
  if (!std::isfinite(s.epsilon)) {
    v.reason = "epsilon must be finite";
    return v;
  }
  const ConeSetup c = cone_setup(s);
  v.expansion_factor = std::abs(c.lambda_u);
  if (s.kick.empty()) {
    v.epsilon_max = std::numeric_limits<double>::infinity();
    v.margin = v.epsilon_max;
    v.accepted = true;
    return v;
  }
  // The slack is monotone in |epsilon| on each side; bracket and bisect.
  const double e = std::abs(s.epsilon);
  auto ok = [&](double eps) {
    return cone_slack(s, c, eps, samples) > 0 && cone_slack(s, c, -eps, samples) > 0;
  };
  double lo = 0.0, hi = 1.0;
  while (ok(hi) && hi < 1e6) {
    lo = hi;
    hi *= 2;
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  v.epsilon_max = lo;
  v.margin = lo - e;
  v.accepted = v.margin > 0;
  if (!v.accepted) v.reason = "perturbation too large: cone field not preserved";
  return v;
}

DirectionResult unstable_direction(const AnosovMapSpec& s, const TorusPoint& p, int depth) {
  std::vector<TorusPoint> orbit(depth + 1);
  orbit[0] = p;
  for (int k = 1; k <= depth; ++k) orbit[k] = step_backward(s, orbit[k - 1]);
  Eigen::Vector2d v(1.0, 0.381966);
  v.normalize();
  for (int k = depth; k >= 1; --k) {
    v = step_differential(s, orbit[k]) * v;
    v.normalize();
  }
  if (v(0) < 0) v = -v;
  return {v, depth};
}

DirectionResult stable_direction(const AnosovMapSpec& s, const TorusPoint& p, int depth) {
  std::vector<TorusPoint> orbit(depth + 1);
  orbit[0] = p;
  for (int k = 1; k <= depth; ++k) orbit[k] = step_forward(s, orbit[k - 1]);
  Eigen::Vector2d v(1.0, -2.618034);
  v.normalize();
  for (int k = depth; k >= 1; --k) {
    v = inverse2(step_differential(s, orbit[k - 1])) * v;
    v.normalize();
  }
  if (v(0) < 0) v = -v;
  return {v, depth};
}

double direction_residual(const AnosovMapSpec& s, const TorusPoint& p, bool unstable, int depth) {
  auto dir = [&](const TorusPoint& q) {
    return unstable ? unstable_direction(s, q, depth).direction
                    : stable_direction(s, q, depth).direction;
  };
  const Eigen::Vector2d img = (step_differential(s, p) * dir(p)).normalized();
  const Eigen::Vector2d e1 = dir(step_forward(s, p));
  return std::abs(img(0) * e1(1) - img(1) * e1(0));
}

namespace {

double sin_angle(const AnosovMapSpec& s, const TorusPoint& p, int depth) {
  const Eigen::Vector2d u = unstable_direction(s, p, depth).direction;
  const Eigen::Vector2d v = stable_direction(s, p, depth).direction;
  return std::abs(u(0) * v(1) - u(1) * v(0));
}

}  // namespace

double log_jacobian(const AnosovMapSpec& s, const TorusPoint& p, int t, Bundle bundle,
                    int depth) {
  if (t == 0) return 0.0;
  if (!has_kick(s)) {
    // constant splitting: J^u_t = lambda^t, J^s_t = lambda^{-t}
    const double l = std::log(std::abs(cone_setup(s).lambda_u));
    return bundle == Bundle::Unstable ? t * l : -t * l;
  }
  Eigen::Vector2d v = bundle == Bundle::Unstable ? unstable_direction(s, p, depth).direction
                                                 : stable_direction(s, p, depth).direction;
  double log_norm = 0.0;
  TorusPoint q = p;
  for (int i = 0; i < std::abs(t); ++i) {
    if (t > 0) {
      v = step_differential(s, q) * v;
      q = step_forward(s, q);
    } else {
      v = step_differential_inverse(s, q) * v;
      q = step_backward(s, q);
    }
    const double n = v.norm();
    log_norm += std::log(n);
    v /= n;
  }
  return log_norm + 0.5 * (std::log(sin_angle(s, q, depth)) - std::log(sin_angle(s, p, depth)));
}

Jacobians jacobians(const AnosovMapSpec& s, const TorusPoint& p, int t, int depth) {
  return {std::exp(log_jacobian(s, p, t, Bundle::Unstable, depth)),
          std::exp(log_jacobian(s, p, t, Bundle::Stable, depth))};
}

ExpansionRates estimate_expansion_rates(const AnosovMapSpec& s, int res, bool pad_lambda1) {
  if (res < 1) throw InputError("grid resolution must be positive");
  ExpansionRates r;
  if (!has_kick(s)) {
    const double l = std::log(std::abs(cone_setup(s).lambda_u));
    r.raw_lambda0 = r.raw_lambda1 = r.lambda0 = r.lambda1 = l;
  } else {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
#pragma omp parallel for reduction(min : lo) reduction(max : hi) schedule(static)
    for (int i = 0; i < res; ++i) {
      for (int j = 0; j < res; ++j) {
        const TorusPoint p{(i + 0.5) / res, (j + 0.5) / res};
        const double l = log_jacobian(s, p, 1, Bundle::Unstable);
        lo = std::min(lo, l);
        hi = std::max(hi, l);
      }
    }
    r.raw_lambda0 = lo;
    r.raw_lambda1 = hi;
    r.lambda0 = 0.99 * lo;
    r.lambda1 = 1.01 * hi;
  }
  if (pad_lambda1 && r.lambda1 < 1.0) {
    r.lambda1 = 1.0;
    r.padded = true;
  }
  r.big_lambda = static_cast<int>(std::ceil(r.lambda1 / r.lambda0 - 1e-12));
  return r;
}

PropagationTimes propagation_times(double h, const ExpansionRates& r) {
  if (!(h > 0 && h < 1)) throw InputError("h must lie in (0,1)");
  PropagationTimes t;
  t.short_time = static_cast<int>(std::ceil(std::log(1.0 / h) / (6.0 * r.lambda1)));
  t.short_time = std::max(t.short_time, 1);
  t.long_time = (6 * r.big_lambda + 1) * t.short_time;
  return t;
}

}  // namespace fuplab
