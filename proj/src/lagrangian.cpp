#include "fuplab/lagrangian.hpp"

#include <algorithm>
#include <cmath>

#include "fuplab/kernels.hpp"
#include "fuplab/linalg.hpp"

namespace fuplab {

double Amplitude::operator()(double x) const {
  const double r = std::abs(x - center);
  if (r >= cutoff * scale) return 0.0;
  const double gauss = std::exp(-0.5 * (r / scale) * (r / scale));
  switch (kind) {
    case Kind::Gaussian:
      return gauss;
    case Kind::WindowedGaussian:
      return gauss * plateau(r, inner * scale, cutoff * scale);
    case Kind::Plateau:
      return plateau(r, inner * scale, cutoff * scale);
  }
  return 0.0;
}

double Amplitude::resolution_scale() const {
  const double transition = (cutoff - inner) * scale;
  switch (kind) {
    case Kind::Gaussian:
      return scale;
    case Kind::WindowedGaussian:
      return std::min(scale, transition);
    case Kind::Plateau:
      return transition;
  }
  return scale;
}

double Phase::value(double x, double hp) const {
  const double y = x - center;
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::Linear:
      return xi0 * y;
    case Kind::Sine:
      return hp * amplitude * length * std::sin(y / length);
    case Kind::Cosine:
      return hp * amplitude * length * (1.0 - std::cos(y / length));
  }
  return 0.0;
}

double Phase::d1(double x, double hp) const {
  const double y = x - center;
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::Linear:
      return xi0;
    case Kind::Sine:
      return hp * amplitude * std::cos(y / length);
    case Kind::Cosine:
      return hp * amplitude * std::sin(y / length);
  }
  return 0.0;
}

double Phase::d2(double x, double hp) const {
  const double y = x - center;
  switch (kind) {
    case Kind::Zero:
    case Kind::Linear:
      return 0.0;
    case Kind::Sine:
      return -hp * amplitude / length * std::sin(y / length);
    case Kind::Cosine:
      return hp * amplitude / length * std::cos(y / length);
  }
  return 0.0;
}

GradientRange gradient_range(const LagrangianSpec& spec, double u_lo, double u_hi, double dx) {
  const int m = std::max(2, static_cast<int>(std::ceil((u_hi - u_lo) / dx)) + 1);
  const double step = (u_hi - u_lo) / (m - 1);
  GradientRange g{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  double curv = 0.0;
  for (int j = 0; j < m; ++j) {
    const double x = u_lo + j * step;
    const double d = spec.phase.d1(x, spec.hprime);
    g.lo = std::min(g.lo, d);
    g.hi = std::max(g.hi, d);
    curv = std::max(curv, std::abs(spec.phase.d2(x, spec.hprime)));
  }
  const double margin = 2.0 * step * curv;
  g.lo -= margin;
  g.hi += margin;
  return g;
}

LagrangianState build_state(const LagrangianSpec& spec) {
  if (!(spec.h > 0 && spec.h < 1)) throw InputError("build_state: h must lie in (0,1)");
  if (!(spec.hprime > 0)) throw InputError("build_state: h' must be positive");
  if (!(spec.domain_margin > 0)) throw InputError("build_state: domain margin must be positive");
  if (!(spec.amplitude.scale > 0) || spec.amplitude.cutoff <= 0) throw InputError("build_state: bad amplitude");

  LagrangianState st;
  st.spec = spec;
  const double k_lo = spec.amplitude.support_lo(), k_hi = spec.amplitude.support_hi();
  st.u_lo = k_lo - spec.domain_margin;
  st.u_hi = k_hi + spec.domain_margin;

  // max |Phi'| over U on a coarse pass, then the resolution rule
  double grad = 0.0;
  for (int j = 0; j <= 4096; ++j) {
    const double x = st.u_lo + (st.u_hi - st.u_lo) * j / 4096.0;
    grad = std::max(grad, std::abs(spec.phase.d1(x, spec.hprime)));
  }
  double need = spec.amplitude.resolution_scale() / spec.samples_per_period;
  if (grad > 0) need = std::min(need, kTwoPi * spec.h / (spec.samples_per_period * grad));
  if (spec.dx > 0 && spec.dx > need)
    throw InputError("build_state: grid step " + std::to_string(spec.dx) +
                     " under-resolves the state; need dx <= " + std::to_string(need));
  st.dx = spec.dx > 0 ? spec.dx : need;

  const int m = static_cast<int>(std::ceil((st.u_hi - st.u_lo) / st.dx)) + 1;
  st.x0 = st.u_lo;
  st.u.resize(m);
  double na = 0.0, nu = 0.0;
  for (int j = 0; j < m; ++j) {
    const double x = st.x0 + j * st.dx;
    const double a = spec.amplitude(x);
    st.u[j] = a == 0.0 ? cdouble(0.0) : a * std::polar(1.0, spec.phase.value(x, spec.hprime) / spec.h);
    na += a * a;
    nu += std::norm(st.u[j]);
  }
  st.amplitude_norm = std::sqrt(na * st.dx);
  st.state_norm = std::sqrt(nu * st.dx);

  st.omega = gradient_range(spec, st.u_lo, st.u_hi, st.dx);
  st.c0 = std::max({k_hi - k_lo, 1.0 / spec.domain_margin, st.omega.diameter() / spec.hprime});
  return st;
}

double outside_mass_window(const LagrangianState& st, double lo, double hi) {
  if (!(lo <= hi)) throw InputError("outside_mass: empty window");
  const double h = st.spec.h;
  // Trapezoid transform F(xi) = (2 pi h)^{-1/2} sum_j dx u_j e^{-i x_j xi / h} is
  // periodic with period P = 2 pi h / dx; |F|^2 is integrated over one period minus the
  // window with Gauss-Legendre panels of half an oscillation of the widest lag.
  std::vector<double> xs, wts;
  std::vector<cdouble> v;
  for (std::size_t j = 0; j < st.u.size(); ++j) {
    if (st.u[j] == cdouble(0.0)) continue;
    xs.push_back(st.x0 + j * st.dx);
    wts.push_back(st.dx);
    v.push_back(st.u[j]);
  }
  if (v.empty()) return 0.0;
  const double extent = xs.back() - xs.front() + st.dx;
  const double period = kTwoPi * h / st.dx;
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * period;
  if (hi - lo >= period) return 0.0;

  const QuadratureRule rule = gauss_legendre(12);
  const double panel = 0.5 * kTwoPi * h / extent;
  std::vector<double> nodes, nw;
  auto add_range = [&](double a, double b) {
    if (!(b > a)) return;
    const int panels = static_cast<int>(std::ceil((b - a) / panel));
    const double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        nodes.push_back(a + w * (p + 0.5 * (rule.nodes[k] + 1.0)));
        nw.push_back(0.5 * w * rule.weights[k]);
      }
  };
  // one period centred on the window: [centre - P/2, lo) and (hi, centre + P/2]
  add_range(centre - half, lo);
  add_range(hi, centre + half);

  std::vector<double> c(nodes.size(), 1.0 / std::sqrt(kTwoPi * h));
  std::vector<cdouble> f;
  kernels::fourier_kernel_apply(nodes, c, xs, wts, h, v, f, kernels::Exec::Parallel);
  double mass = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) mass += nw[k] * std::norm(f[k]);
  return std::sqrt(mass);
}

double outside_mass(const LagrangianState& st, double radius) {
  if (!(radius >= 0)) throw InputError("outside_mass: radius must be non-negative");
  return outside_mass_window(st, st.omega.lo - radius, st.omega.hi + radius);
}

double gaussian_outside_mass(double h, double m) { return std::sqrt(std::sqrt(kPi) * std::erfc(m / h)); }

LagrangianFamily default_family(double tau) {
  LagrangianFamily f;
  f.tau = tau;
  f.amplitude.kind = Amplitude::Kind::WindowedGaussian;
  f.amplitude.scale = 1.25;
  f.amplitude.inner = 14.0;
  f.amplitude.cutoff = 15.0;
  f.domain_margin = 1.0;
  f.phase.kind = Phase::Kind::Cosine;
  f.phase.amplitude = 1.0;
  // Phi' = h' sin(x / l) reaches +-h' at the edge of U
  f.phase.length = (f.amplitude.cutoff * f.amplitude.scale + f.domain_margin) / (0.5 * kPi);
  return f;
}

LagrangianScan lagrangian_scan(const LagrangianFamily& family, const std::vector<double>& hs) {
  LagrangianScan scan;
  scan.rows.resize(hs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < hs.size(); ++i) {
    LagrangianSpec spec;
    spec.h = hs[i];
    spec.hprime = family.hprime_coef * std::pow(hs[i], family.tau);
    spec.amplitude = family.amplitude;
    spec.phase = family.phase;
    spec.domain_margin = family.domain_margin;
    const LagrangianState st = build_state(spec);
    LagrangianRow& row = scan.rows[i];
    row.h = spec.h;
    row.hprime = spec.hprime;
    row.c0 = st.c0;
    row.outside_mass = outside_mass(st, spec.hprime / st.c0);
  }
  std::vector<double> xs, ys;
  for (auto& row : scan.rows) {
    if (row.outside_mass > 0) {
      xs.push_back(std::log(1.0 / row.h));
      ys.push_back(-std::log(row.outside_mass));
    }
    if (xs.size() >= 2) row.slope_partial = least_squares(xs, ys).slope;
  }
  if (xs.size() >= 2) {
    const LinearFit f = least_squares(xs, ys);
    scan.slope = f.slope;
    scan.r2 = f.r2;
  }
  return scan;
}

}  // namespace fuplab
