#include "fuplab/fup.hpp"

#include <algorithm>
#include <cmath>

#include "fuplab/kernels.hpp"
#include "fft.hpp"

namespace fuplab {

namespace {

constexpr int kMaxDense = 1 << 14;
constexpr std::size_t kMaxStoredEntries = std::size_t{1} << 26;

void fft_inplace(CVector& v, int sign) { fft::inplace(v.data(), static_cast<int>(v.size()), sign); }

}  // namespace

SemiclassicalFourier::SemiclassicalFourier(double h, double L, int M)
    : h_(h), L_(L), M_(M), dx_(2.0 * L / M), dxi_(kTwoPi * h / (M * (2.0 * L / M))) {
  xi_max_ = 0.5 * M_ * dxi_;
}

int SemiclassicalFourier::nyquist_size(double h, double L) {
  const double need = 8.0 * (2.0 * L) * (2.0 * L) / (kTwoPi * h);
  int m = 2;
  while (m < need) m *= 2;
  return m;
}

SemiclassicalFourier semiclassical_ft(double h, double L, int M) {
  if (!(h > 0) || !(L > 0) || M < 2) throw InputError("semiclassical_ft: need h > 0, L > 0, M >= 2");
  const int need = SemiclassicalFourier::nyquist_size(h, L);
  if (M < 8.0 * (2.0 * L) * (2.0 * L) / (kTwoPi * h))
    throw InputError("semiclassical_ft: Nyquist rule violated, need M >= " + std::to_string(need));
  if (M > kMaxDense) throw ResourceError("semiclassical_ft: M exceeds the dense limit 2^14");
  return {h, L, M};
}

CMatrix SemiclassicalFourier::dense() const {
  CMatrix f(M_, M_);
  const double s = 1.0 / std::sqrt(static_cast<double>(M_));
  for (int j = 0; j < M_; ++j)
    for (int k = 0; k < M_; ++k) f(k, j) = s * std::polar(1.0, -x(j) * xi(k) / h_);
  return f;
}

// x_j xi_k / h = L Xi / h - L k dxi / h - Xi j dx / h + 2 pi jk / M
CVector SemiclassicalFourier::apply(const CVector& f) const {
  if (f.size() != M_) throw InputError("SemiclassicalFourier::apply: size mismatch");
  CVector v(M_);
  for (int j = 0; j < M_; ++j) v(j) = f(j) * std::polar(1.0, xi_max_ * j * dx_ / h_);
  fft_inplace(v, -1);
  const cdouble c = std::polar(1.0 / std::sqrt(static_cast<double>(M_)), -L_ * xi_max_ / h_);
  for (int k = 0; k < M_; ++k) v(k) *= c * std::polar(1.0, L_ * k * dxi_ / h_);
  return v;
}

CVector SemiclassicalFourier::apply_inverse(const CVector& g) const {
  if (g.size() != M_) throw InputError("SemiclassicalFourier::apply_inverse: size mismatch");
  CVector v(M_);
  const cdouble c = std::polar(1.0 / std::sqrt(static_cast<double>(M_)), L_ * xi_max_ / h_);
  for (int k = 0; k < M_; ++k) v(k) = g(k) * c * std::polar(1.0, -L_ * k * dxi_ / h_);
  fft_inplace(v, +1);
  for (int j = 0; j < M_; ++j) v(j) *= std::polar(1.0, -xi_max_ * j * dx_ / h_);
  return v;
}

namespace {

struct Nodes {
  std::vector<double> pos;
  std::vector<double> weight;  // sqrt(quadrature weight) times any cutoff value
};

double max_abs(const IntervalSet& s) {
  if (s.empty()) return 0.0;
  const Interval hull = s.hull();
  return std::max(std::abs(hull.left), std::abs(hull.right));
}

void add_panel(Nodes& out, double a, double b, int p) {
  const QuadratureRule rule = gauss_legendre(p);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < p; ++i) {
    out.pos.push_back(mid + half * rule.nodes[i]);
    out.weight.push_back(std::sqrt(half * rule.weights[i]));
  }
}

int panel_nodes(double length, double other_radius, double h, double q) {
  return std::max(1, static_cast<int>(std::ceil(q * (1.0 + length * other_radius / h))));
}

Nodes gauss_nodes(const IntervalSet& set, double other_radius, double h, double q) {
  Nodes n;
  for (const auto& I : set.intervals()) {
    if (I.length() <= 0) continue;  // null sets do not see L^2
    add_panel(n, I.left, I.right, panel_nodes(I.length(), other_radius, h, q));
  }
  return n;
}

// Largest singular value of K_{ba} = c_b d_a (2 pi h)^{-1/2} e^{-i s_b t_a / h}.
double kernel_norm(const Nodes& rows, const Nodes& cols, double h) {
  const std::size_t nr = rows.pos.size(), nc = cols.pos.size();
  if (nr == 0 || nc == 0) return 0.0;
  const double pref = 1.0 / std::sqrt(kTwoPi * h);
  if (nr * nc <= kMaxStoredEntries) {
    CMatrix k(nr, nc);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t a = 0; a < static_cast<std::ptrdiff_t>(nc); ++a)
      for (std::size_t b = 0; b < nr; ++b)
        k(b, a) = pref * rows.weight[b] * cols.weight[a] * std::polar(1.0, -rows.pos[b] * cols.pos[a] / h);
    return operator_norm(k);
  }
  std::vector<double> c(rows.weight), d(cols.weight);
  for (auto& v : c) v *= pref;
  LinearOperator op;
  op.rows = static_cast<Eigen::Index>(nr);
  op.cols = static_cast<Eigen::Index>(nc);
  op.apply = [&](const CVector& x) {
    std::vector<cdouble> in(x.data(), x.data() + x.size()), out;
    kernels::fourier_kernel_apply(rows.pos, c, cols.pos, d, h, in, out, kernels::Exec::Parallel);
    return CVector(Eigen::Map<CVector>(out.data(), static_cast<Eigen::Index>(out.size())));
  };
  op.apply_adjoint = [&](const CVector& y) {
    std::vector<cdouble> in(y.data(), y.data() + y.size()), out;
    kernels::fourier_kernel_apply(cols.pos, d, rows.pos, c, -h, in, out, kernels::Exec::Parallel);
    return CVector(Eigen::Map<CVector>(out.data(), static_cast<Eigen::Index>(out.size())));
  };
  const auto r = top_singular_value(op);
  if (!r.converged) throw NumericalError("fup_norm: Lanczos did not converge");
  return r.value;
}

template <class Build>
FupResult refine_until_converged(const FupOptions& opt, Build build) {
  FupResult r;
  double q = opt.nodes_per_phase;
  auto [n0, rows0, cols0] = build(q);
  r.norm = n0;
  r.rows = rows0;
  r.cols = cols0;
  r.converged = false;
  for (int it = 0; it < opt.max_refinements; ++it) {
    q *= 2;
    auto [n1, rows1, cols1] = build(q);
    r.delta = std::abs(n1 - r.norm);
    r.norm = n1;
    r.rows = rows1;
    r.cols = cols1;
    if (r.delta <= opt.tolerance) {
      r.converged = true;
      break;
    }
  }
  return r;
}

struct Built {
  double norm;
  std::size_t rows, cols;
};

}  // namespace

FupResult fup_norm(double h, const IntervalSet& om, const IntervalSet& op, const FupOptions& opt) {
  if (!(h > 0)) throw InputError("fup_norm: h must be positive");
  const double vb = std::sqrt(om.measure() * op.measure() / (kTwoPi * h));
  if (om.measure() == 0 || op.measure() == 0) {
    FupResult r;
    r.volume_bound = vb;
    return r;
  }
  FupResult r;
  if (opt.method == FupMethod::Gauss) {
    const double rp = max_abs(op), rm = max_abs(om);
    r = refine_until_converged(opt, [&](double q) {
      const Nodes rows = gauss_nodes(om, rp, h, q);
      const Nodes cols = gauss_nodes(op, rm, h, q);
      return Built{kernel_norm(rows, cols, h), rows.pos.size(), cols.pos.size()};
    });
  } else {
    double L = opt.window > 0 ? opt.window : 4.0;
    const double reach = std::max(max_abs(om), max_abs(op)) + 1.0;
    if (opt.window <= 0) L = std::max(L, reach);
    if (reach > L) throw InputError("fup_norm: window too small for the sets");
    int M = opt.grid_points > 0 ? opt.grid_points : SemiclassicalFourier::nyquist_size(h, L);
    FupOptions o = opt;
    r = refine_until_converged(o, [&](double) {
      const SemiclassicalFourier f = semiclassical_ft(h, L, M);
      std::vector<int> rows, cols;
      for (int k = 0; k < M; ++k)
        if (om.contains(f.xi(k))) rows.push_back(k);
      for (int j = 0; j < M; ++j)
        if (op.contains(f.x(j))) cols.push_back(j);
      CMatrix sub(rows.size(), cols.size());
      const double s = 1.0 / std::sqrt(static_cast<double>(M));
      for (std::size_t a = 0; a < cols.size(); ++a)
        for (std::size_t b = 0; b < rows.size(); ++b)
          sub(b, a) = s * std::polar(1.0, -f.xi(rows[b]) * f.x(cols[a]) / h);
      M *= 2;
      return Built{operator_norm(sub), rows.size(), cols.size()};
    });
  }
  r.volume_bound = vb;
  return r;
}

BetaFit fit_beta(const std::vector<double>& hs, const std::vector<double>& norms) {
  if (hs.size() != norms.size()) throw InputError("fit_beta: size mismatch");
  std::vector<double> x, y;
  BetaFit f;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (!(norms[i] > 0)) {
      ++f.excluded;
      continue;
    }
    x.push_back(std::log(1.0 / hs[i]));
    y.push_back(-std::log(norms[i]));
  }
  if (x.size() < 4) throw InputError("fit_beta: need at least 4 positive norms");
  const LinearFit lf = least_squares(x, y);
  f.beta = lf.slope;
  f.intercept = lf.intercept;
  f.r2 = lf.r2;
  return f;
}

Rescaled window_rescale(const IntervalSet& om, const IntervalSet& op, double h, const GammaExponents& g) {
  auto pair_ok = [](double g0, double g1) { return 0 <= g1 && g1 < g0 && g0 <= 1; };
  if (!pair_ok(g.g0_plus, g.g1_plus) || !pair_ok(g.g0_minus, g.g1_minus))
    throw InputError("window_rescale: need 0 <= gamma1 < gamma0 <= 1 for both signs");
  if (!(g.g1_plus + g.g1_minus < 1 && 1 < g.g0_plus + g.g0_minus))
    throw InputError("window_rescale: need gamma1+ + gamma1- < 1 < gamma0+ + gamma0-");
  if (!(h > 0 && h < 1)) throw InputError("window_rescale: h must lie in (0,1)");
  Rescaled r;
  r.gamma0 = std::min(g.g0_plus, 1.0 - g.g1_minus);
  r.gamma1 = std::max(g.g1_plus, 1.0 - g.g0_minus);
  r.gamma = r.gamma0 - r.gamma1;
  if (!(r.gamma > 0)) throw InputError("window_rescale: gamma <= 0");
  r.omega_plus = op.empty() ? op : op.scaled(std::pow(h, -r.gamma1));
  r.omega_minus = om.empty() ? om : om.scaled(std::pow(h, r.gamma0 - 1.0));
  r.h_tilde = std::pow(h, r.gamma);
  return r;
}

SmoothCutoff::SmoothCutoff(const IntervalSet& omega, double h)
    : fattened_(omega.fattened(0.5 * h)), support_(omega.fattened(h)), h_(h) {
  if (!(h > 0)) throw InputError("smooth_cutoff: h must be positive");
}

double SmoothCutoff::operator()(double x) const {
  const double d = 0.5 * h_;
  // CDF of the mollifier on [-1, 1]
  auto cdf = [](double t) { return smooth_step(0.5 * (t + 1.0)); };
  double v = 0.0;
  for (const auto& I : fattened_.intervals()) {
    if (x < I.left - d || x > I.right + d) continue;
    v += cdf((x - I.left) / d) - cdf((x - I.right) / d);
  }
  return std::clamp(v, 0.0, 1.0);
}

FupResult fup_norm_smoothed(double h, const SmoothCutoff& cm, const SmoothCutoff& cp,
                            const FupOptions& opt) {
  if (!(h > 0)) throw InputError("fup_norm_smoothed: h must be positive");
  FupResult r;
  if (cm.core().empty() || cp.core().empty()) return r;
  auto nodes = [&](const SmoothCutoff& chi, double other, double q) {
    Nodes n;
    const double w = chi.h();
    for (const auto& I : chi.core().intervals()) {
      const double d = 0.5 * w;
      if (I.length() > w) {
        add_panel(n, I.left - d, I.left + d, panel_nodes(w, other, h, q) + static_cast<int>(8 * q));
        add_panel(n, I.left + d, I.right - d, panel_nodes(I.length() - w, other, h, q));
        add_panel(n, I.right - d, I.right + d, panel_nodes(w, other, h, q) + static_cast<int>(8 * q));
      } else {
        add_panel(n, I.left - d, I.right + d,
                  panel_nodes(I.length() + w, other, h, q) + static_cast<int>(16 * q));
      }
    }
    for (std::size_t i = 0; i < n.pos.size(); ++i) n.weight[i] *= chi(n.pos[i]);
    return n;
  };
  const double rp = max_abs(cp.support()), rm = max_abs(cm.support());
  r = refine_until_converged(opt, [&](double q) {
    const Nodes rows = nodes(cm, rp, q);
    const Nodes cols = nodes(cp, rm, q);
    return Built{kernel_norm(rows, cols, h), rows.pos.size(), cols.pos.size()};
  });
  return r;
}

double beta_reference(double nu, double K) {
  if (!(nu > 0 && nu <= 1)) throw InputError("beta_reference: nu must lie in (0,1]");
  if (!(K > 0)) throw InputError("beta_reference: K must be positive");
  return std::exp(-std::exp(std::exp(K / (nu * nu * nu))));
}

}  // namespace fuplab
