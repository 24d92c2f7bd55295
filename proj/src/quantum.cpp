#include "fuplab/quantum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

#include "fuplab/kernels.hpp"
#include "fft.hpp"

namespace fuplab {

namespace {

// e^{i pi q m^2 / N} for m = 0..N-1, exponent reduced mod 2N (needs N even).
std::vector<cdouble> chirp(int N, std::int64_t q) {
  const std::int64_t two_n = 2 * static_cast<std::int64_t>(N);
  const std::int64_t qr = ((q % two_n) + two_n) % two_n;
  std::vector<cdouble> out(N);
  for (std::int64_t m = 0; m < N; ++m) {
    const std::int64_t e = (qr * ((m * m) % two_n)) % two_n;
    out[m] = std::polar(1.0, kPi * static_cast<double>(e) / N);
  }
  return out;
}

int mod(int a, int n) { return ((a % n) + n) % n; }

double hermitian_residual(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

HilbertSpace HilbertSpace::make(int N) {
  if (N < 2) throw InputError("HilbertSpace: N must be >= 2, got " + std::to_string(N));
  if (N % 2 != 0)
    throw InputError("HilbertSpace: N must be even for the cat-map quantization; try N = " +
                     std::to_string(N + 1) + (N > 2 ? " or " + std::to_string(N - 1) : ""));
  return HilbertSpace{N};
}

Operator make_operator(CMatrix m, std::string label, bool unitary) {
  Operator op;
  const double scale = std::max(1.0, m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
  op.hermitian = m.size() > 0 && hermitian_residual(m) <= 1e-10 * scale;
  op.matrix = std::move(m);
  op.label = std::move(label);
  op.unitary = unitary;
  return op;
}

CMatrix translation_operator(const HilbertSpace& space, int k1, int k2) {
  const int N = space.N;
  CMatrix t = CMatrix::Zero(N, N);
  for (int j = 0; j < N; ++j) {
    // e^{pi i k1 (2j + k2) / N}, exponent reduced mod 2N
    const int e = mod(k1 * mod(2 * j + k2, 2 * N), 2 * N);
    t(j, mod(j + k2, N)) = std::polar(1.0, kPi * e / N);
  }
  return t;
}

Operator quantize_observable(const Symbol& a, const HilbertSpace& space, const QuantizeOptions& opt,
                             QuantizeReport* report) {
  const int N = space.N;
  if (N < 2 || N % 2) throw InputError("quantize_observable: N must be even and >= 2");
  const int K = opt.sample_size > 0 ? opt.sample_size : std::max(2 * N, 128);
  if (K < N) throw InputError("quantize_observable: need at least N samples per side");

  const auto samples = kernels::sample_symbol(a, K, 0.0, kernels::Exec::Parallel);
  // row r <-> xi sample, column c <-> x sample; after the transform r <-> k2, c <-> k1
  std::vector<cdouble> c(samples.begin(), samples.end());
  fft::two_d(c.data(), K, K, -1);
  const double norm = 1.0 / (static_cast<double>(K) * K);
  auto freq = [K](int r) { return r <= K / 2 ? r : r - K; };

  const int band = N / 2 - 1;
  double total = 0.0, kept = 0.0;
  for (int r = 0; r < K; ++r) {
    for (int s = 0; s < K; ++s) {
      cdouble& v = c[static_cast<std::size_t>(r) * K + s];
      v *= norm;
      const int k2 = freq(r), k1 = freq(s);
      if (opt.flavor == Quantization::AntiWick)
        v *= std::exp(-kPi * (double(k1) * k1 + double(k2) * k2) / (2.0 * N));
      const double e = std::norm(v);
      total += e;
      if (std::abs(k1) <= band && std::abs(k2) <= band) kept += e;
    }
  }
  const double tail = total > 0 ? std::max(0.0, total - kept) / total : 0.0;
  const bool breach = tail > opt.band_tolerance;
  if (report) {
    report->tail_fraction = tail;
    report->truncated = breach;
  }
  if (breach && !opt.allow_truncation)
    throw InputError("quantize_observable: symbol is not band-limited below N/2 (tail fraction " +
                     std::to_string(tail) + "); quantizing would alias");

  CMatrix op = CMatrix::Zero(N, N);
#pragma omp parallel for schedule(dynamic)
  for (int k2 = -band; k2 <= band; ++k2) {
    std::vector<cdouble> g(2 * static_cast<std::size_t>(N), cdouble(0.0));
    const int r = mod(k2, K);
    for (int k1 = -band; k1 <= band; ++k1) g[mod(k1, 2 * N)] = c[static_cast<std::size_t>(r) * K + mod(k1, K)];
    fft::inplace(g.data(), 2 * N, +1);
    for (int j = 0; j < N; ++j) op(j, mod(j + k2, N)) = g[mod(2 * j + k2, 2 * N)];
  }
  return make_operator(std::move(op), opt.flavor == Quantization::Weyl ? "Op" : "Op_aw");
}

// ---------------------------------------------------------------- propagator

Propagator::Propagator(const AnosovMapSpec& spec, const HilbertSpace& space) : N_(space.N) {
  if (N_ < 2 || N_ % 2) throw InputError("Propagator: N must be even and >= 2");
  std::int64_t a = spec.linear(0, 0), b = spec.linear(0, 1), c = spec.linear(1, 0), d = spec.linear(1, 1);
  if (a * d - b * c != 1) throw InputError("Propagator: linear part must have determinant 1");

  // Reduce M = X_1 ... X_k (s I) R^{s b} by left multiplications with shears.
  // L^q = [[1,0],[q,1]] is the position chirp, R^q = [[1,q],[0,1]] the momentum chirp.
  std::vector<Factor> left;  // X_1 .. X_k
  while (c != 0) {
    if (a != 0 && std::abs(c) >= std::abs(a)) {
      const std::int64_t q = c / a;
      c -= q * a;
      d -= q * b;
      left.push_back({Factor::Kind::PositionPhase, chirp(N_, q)});
    } else {
      const std::int64_t q = a == 0 ? -1 : a / c;
      a -= q * c;
      b -= q * d;
      left.push_back({Factor::Kind::MomentumPhase, chirp(N_, -q)});
    }
  }
  // now [[s, b], [0, s]] with s = +-1
  const std::int64_t s = a;
  if (b != 0) factors_.push_back({Factor::Kind::MomentumPhase, chirp(N_, -(s * b))});
  if (s < 0) factors_.push_back({Factor::Kind::Parity, {}});
  for (auto it = left.rbegin(); it != left.rend(); ++it) factors_.push_back(*it);

  if (spec.epsilon != 0.0 && !spec.kick.empty()) {
    std::vector<cdouble> kick(N_);
    for (int j = 0; j < N_; ++j)
      kick[j] = std::polar(1.0, kTwoPi * N_ * spec.epsilon * spec.kick.value(double(j) / N_));
    factors_.push_back({Factor::Kind::PositionPhase, std::move(kick)});
  }
}

void Propagator::apply_factor(const Factor& f, CMatrix& x, bool inverse) const {
  const int n = N_;
  switch (f.kind) {
    case Factor::Kind::PositionPhase:
      for (Eigen::Index col = 0; col < x.cols(); ++col)
        for (int j = 0; j < n; ++j) x(j, col) *= inverse ? std::conj(f.phase[j]) : f.phase[j];
      break;
    case Factor::Kind::MomentumPhase: {
      // the chirp sits on the discrete momentum index: F^{-1} diag F
      fft::many(x.data(), n, static_cast<int>(x.cols()), -1);
      for (Eigen::Index col = 0; col < x.cols(); ++col)
        for (int m = 0; m < n; ++m) x(m, col) *= (inverse ? std::conj(f.phase[m]) : f.phase[m]) / double(n);
      fft::many(x.data(), n, static_cast<int>(x.cols()), +1);
      break;
    }
    case Factor::Kind::Parity:
      for (Eigen::Index col = 0; col < x.cols(); ++col)
        for (int j = 1; j < n / 2; ++j) std::swap(x(j, col), x(n - j, col));
      break;
  }
}

CVector Propagator::apply(const CVector& v) const {
  CMatrix x = v;
  for (const auto& f : factors_) apply_factor(f, x, false);
  return x.col(0);
}

CVector Propagator::apply_inverse(const CVector& v) const {
  CMatrix x = v;
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) apply_factor(*it, x, true);
  return x.col(0);
}

CMatrix Propagator::apply_power(const CMatrix& x, int t) const {
  if (x.rows() != N_) throw InputError("Propagator::apply_power: dimension mismatch");
  CMatrix y = x;
  for (int s = 0; s < std::abs(t); ++s) {
    if (t > 0)
      for (const auto& f : factors_) apply_factor(f, y, false);
    else
      for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) apply_factor(*it, y, true);
  }
  return y;
}

CMatrix Propagator::dense() const { return apply_power(CMatrix::Identity(N_, N_), 1); }

Operator propagator(const AnosovMapSpec& spec, const HilbertSpace& space) {
  return make_operator(Propagator(spec, space).dense(), "U", true);
}

Operator heisenberg(const Operator& a, const Propagator& u, int t) {
  if (t == 0) return a;
  // U^{-t} A U^{t} = (U^{-t} (U^{-t} A)^H)^H
  const CMatrix left = u.apply_power(a.matrix, -t);
  CMatrix m = u.apply_power(left.adjoint(), -t).adjoint();
  Operator out = make_operator(std::move(m), a.label + "(" + std::to_string(t) + ")", a.unitary);
  return out;
}

EgorovResult egorov_discrepancy(const AnosovMapSpec& spec, const Symbol& a, const HilbertSpace& space,
                                int t) {
  QuantizeOptions opt;
  opt.allow_truncation = true;
  QuantizeReport r0, r1;
  const Operator op = quantize_observable(a, space, opt, &r0);
  const Propagator u(spec, space);
  const Operator at = heisenberg(op, u, t);
  const Symbol moved = [&](double x, double xi) {
    const TorusPoint p = apply_map(spec, {x, xi}, t);
    return a(p.x, p.xi);
  };
  const Operator target = t == 0 ? op : quantize_observable(moved, space, opt, &r1);
  EgorovResult res;
  res.discrepancy = operator_norm(at.matrix - target.matrix);
  res.tail_fraction = std::max(r0.tail_fraction, r1.tail_fraction);
  res.band_limited = res.tail_fraction <= opt.band_tolerance;
  return res;
}

// ---------------------------------------------------------------- words

WordOperators::WordOperators(const AnosovMapSpec& spec, const Partition& part, const HilbertSpace& space,
                             Alphabet alphabet, const QuantizeOptions& opt)
    : u_(spec, space), part_(part), space_(space), alphabet_(alphabet), opt_(opt),
      ids_(part.letters(alphabet)) {
  ops_.resize(ids_.size());
}

const CMatrix& WordOperators::letter(int l) const {
  const auto it = std::find(ids_.begin(), ids_.end(), l);
  if (it == ids_.end()) throw InputError("WordOperators: unknown letter " + std::to_string(l));
  const std::size_t i = static_cast<std::size_t>(it - ids_.begin());
  std::lock_guard<std::mutex> guard(*lock_);
  if (!ops_[i])
    ops_[i] = std::make_unique<CMatrix>(
        quantize_observable(part_.letter_symbol(alphabet_, l), space_, opt_).matrix);
  return *ops_[i];
}

Operator WordOperators::build(const Word& w) const {
  const int N = space_.N;
  const int n = static_cast<int>(w.size());
  if (n == 0) return make_operator(CMatrix::Identity(N, N), "A[]", true);
  CMatrix x;
  if (w.orientation == Orientation::Future) {
    // A^-_v = U^{-(n-1)} A_{v_{n-1}} U ... U A_{v_0}
    x = letter(w.letters[0]);
    for (int j = 1; j < n; ++j) x = letter(w.letters[j]) * u_.apply_power(x, 1);
    x = u_.apply_power(x, -(n - 1));
  } else {
    // A^+_w = U A_{w_1} U ... U A_{w_n} U^{-n}
    x = letter(w.letters[n - 1]);
    for (int j = n - 2; j >= 0; --j) x = letter(w.letters[j]) * u_.apply_power(x, 1);
    x = u_.apply_power(x, 1);
    x = u_.apply_power(x.adjoint(), n).adjoint();
  }
  return make_operator(std::move(x), "A[" + w.str() + "]");
}

LinearOperator WordOperators::chain(const Word& w) const {
  // Future v: A_{v_{n-1}} U ... U A_{v_0}; past w: A_{w_1} U ... U A_{w_n}.
  std::vector<const CMatrix*> seq;  // in order of application
  for (std::size_t j = 0; j < w.size(); ++j) {
    const std::size_t k = w.orientation == Orientation::Future ? j : w.size() - 1 - j;
    seq.push_back(&letter(w.letters[k]));
  }
  const Eigen::Index N = space_.N;
  LinearOperator op{N, N, nullptr, nullptr};
  op.apply = [this, seq](const CVector& v) {
    CVector x = v;
    for (std::size_t j = 0; j < seq.size(); ++j) {
      if (j > 0) x = u_.apply(x);
      x = *seq[j] * x;
    }
    return x;
  };
  op.apply_adjoint = [this, seq](const CVector& v) {
    CVector x = v;
    for (std::size_t j = seq.size(); j-- > 0;) {
      x = seq[j]->adjoint() * x;
      if (j > 0) x = u_.apply_inverse(x);
    }
    return x;
  };
  return op;
}

double WordOperators::norm(const Word& w) const {
  if (w.size() == 0) return 1.0;
  const LinearOperator op = chain(w);
  const auto r = top_singular_value(op);
  if (r.converged) return r.value;
  return operator_norm(build(w).matrix);
}

Operator word_operator(const AnosovMapSpec& spec, const Partition& part, const Word& w,
                       const HilbertSpace& space) {
  return WordOperators(spec, part, space, w.alphabet).build(w);
}

int key_word_length(double h, double lambda0, double factor) {
  if (!(h > 0 && h < 1) || !(lambda0 > 0)) throw InputError("key_word_length: need 0 < h < 1, lambda0 > 0");
  const int base = static_cast<int>(std::floor(std::log(1.0 / h) / lambda0)) + 1;
  return static_cast<int>(std::ceil(factor * base - 1e-12));
}

KeyEstimateScan key_estimate_scan(const AnosovMapSpec& spec, const Partition& part,
                                  const std::vector<int>& Ns, const ExpansionRates& rates,
                                  const KeyEstimateOptions& opt) {
  KeyEstimateScan scan;
  std::mt19937 rng(opt.seed);
  std::vector<double> xs, ys;
  for (const int N : Ns) {
    const HilbertSpace space = HilbertSpace::make(N);
    const WordOperators ops(spec, part, space, Alphabet::Coarse);
    KeyEstimateRow row;
    row.N = N;
    row.h = space.h();
    row.word_length = key_word_length(row.h, rates.lambda0, opt.length_factor);
    Word star{Alphabet::Coarse, std::vector<int>(row.word_length, kStar), Orientation::Future};
    row.norm = ops.norm(star);
    row.word = star.str();
    if (opt.policy == WordPolicy::WorstOfSample) {
      std::bernoulli_distribution coin(0.5);
      for (int s = 0; s < opt.samples; ++s) {
        Word w{Alphabet::Coarse, {}, Orientation::Future};
        for (int j = 0; j < row.word_length; ++j) w.letters.push_back(coin(rng) ? 1 : kStar);
        const double v = ops.norm(w);
        if (v > row.norm) {
          row.norm = v;
          row.word = w.str();
        }
      }
    }
    if (row.norm > 0) {
      xs.push_back(std::log(1.0 / row.h));
      ys.push_back(-std::log(row.norm));
    }
    if (xs.size() >= 2) row.beta_fit_partial = least_squares(xs, ys).slope;
    scan.rows.push_back(row);
  }
  if (xs.size() >= 2) {
    const LinearFit f = least_squares(xs, ys);
    scan.beta_fit = f.slope;
    scan.r2 = f.r2;
  }
  return scan;
}

// ---------------------------------------------------------------- spectra

EigenSystem eigensystem(const CMatrix& a) {
  if (a.rows() != a.cols()) throw InputError("eigensystem: matrix must be square");
  if (a.rows() > 2048) throw ResourceError("eigensystem: dense limit is N <= 2048");
  Eigen::ComplexEigenSolver<CMatrix> es(a, true);
  if (es.info() != Eigen::Success) throw NumericalError("eigensystem: QR iteration did not converge");
  EigenSystem sys;
  for (Eigen::Index k = 0; k < a.rows(); ++k) {
    CVector v = es.eigenvectors().col(k);
    v.normalize();
    sys.pairs.push_back({es.eigenvalues()(k), v});
  }
  std::sort(sys.pairs.begin(), sys.pairs.end(), [](const EigenPair& p, const EigenPair& q) {
    const double mp = std::abs(p.value), mq = std::abs(q.value);
    if (std::abs(mp - mq) > 1e-12 * std::max(1.0, mp)) return mp > mq;
    return std::arg(p.value) < std::arg(q.value);
  });
  for (const auto& p : sys.pairs)
    sys.max_residual = std::max(sys.max_residual, (a * p.vector - p.value * p.vector).norm());
  return sys;
}

std::vector<cdouble> semiclassical_measure(const CVector& u, const std::vector<Operator>& observables) {
  std::vector<cdouble> out;
  out.reserve(observables.size());
  for (const auto& op : observables) {
    if (op.matrix.cols() != u.size()) throw InputError("semiclassical_measure: dimension mismatch");
    out.push_back(u.dot(op.matrix * u));
  }
  return out;
}

std::vector<MassRow> mass_scan(const AnosovMapSpec& spec, const Symbol& a, const std::vector<int>& Ns,
                               Quantization flavor) {
  std::vector<MassRow> rows;
  for (const int N : Ns) {
    const HilbertSpace space = HilbertSpace::make(N);
    QuantizeOptions opt;
    opt.flavor = flavor;
    opt.allow_truncation = true;
    const Operator obs = quantize_observable(a, space, opt);
    const EigenSystem sys = eigensystem(Propagator(spec, space).dense());
    MassRow row;
    row.N = N;
    row.min_mass = std::numeric_limits<double>::infinity();
    for (const auto& p : sys.pairs) {
      const double m = p.vector.dot(obs.matrix * p.vector).real();
      if (m < row.min_mass) {
        row.min_mass = m;
        row.argmin_phase = std::arg(p.value);
      }
    }
    row.eigencount = static_cast<int>(sys.pairs.size());
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------- damping

double damping_eta(const DampedSpec& d, const Partition& part, int grid_n) {
  const Grid2 g{grid_n};
  double eta = std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid_n; ++j)
    for (int i = 0; i < grid_n; ++i) {
      const TorusPoint p = g.point(i, j);
      if (part.a1(p.x, p.xi) > 0) eta = std::min(eta, d.b(p.x, p.xi));
    }
  if (!std::isfinite(eta)) throw InputError("damping_eta: a_1 has empty sampled support");
  return eta;
}

CVector DampedPropagator::apply(const CVector& v) const {
  return left ? CVector(damping * u.apply(v)) : u.apply(damping * v);
}

CMatrix DampedPropagator::dense() const {
  return left ? CMatrix(damping * u.dense()) : u.apply_power(damping, 1);
}

DampedPropagator damped_propagator(const AnosovMapSpec& spec, const DampedSpec& d, const HilbertSpace& space) {
  if (!d.b) throw InputError("damped_propagator: damping symbol missing");
  QuantizeOptions opt;
  opt.allow_truncation = true;
  const Symbol eb = [b = d.b](double x, double xi) { return std::exp(-b(x, xi)); };
  return DampedPropagator{Propagator(spec, space), quantize_observable(eb, space, opt).matrix, d.left};
}

double damped_alpha1(double alpha, double eta, double lambda1) {
  if (!(lambda1 > 0)) throw InputError("damped_alpha1: lambda1 must be positive");
  return alpha * eta / (6.0 * lambda1);
}

double damped_beta1(double beta, double alpha1) { return std::min({beta / 2.0, alpha1, 0.25}); }

DampedScan damped_decay_scan(const AnosovMapSpec& spec, const DampedSpec& d, const Partition& part,
                             const std::vector<int>& Ns, const ExpansionRates& rates, double alpha,
                             double beta, double length_factor) {
  DampedScan scan;
  scan.eta = damping_eta(d, part);
  scan.alpha1 = damped_alpha1(alpha, scan.eta, rates.lambda1);
  scan.beta1 = damped_beta1(beta, scan.alpha1);
  std::vector<double> xs, ys;
  for (const int N : Ns) {
    const HilbertSpace space = HilbertSpace::make(N);
    const DampedPropagator dp = damped_propagator(spec, d, space);
    DampedRow row;
    row.N = N;
    row.h = space.h();
    row.steps = key_word_length(row.h, rates.lambda0, length_factor);
    row.alpha1 = scan.alpha1;

    const CMatrix dense = dp.dense();
    row.max_singular = operator_norm(dense);
    Eigen::ComplexEigenSolver<CMatrix> es(dense, false);
    row.spectral_radius = es.eigenvalues().cwiseAbs().maxCoeff();

    const int steps = row.steps;
    LinearOperator pow{N, N, nullptr, nullptr};
    pow.apply = [&dp, steps](const CVector& v) {
      CVector x = v;
      for (int s = 0; s < steps; ++s) x = dp.apply(x);
      return x;
    };
    pow.apply_adjoint = [&dp, steps](const CVector& v) {
      CVector x = v;
      for (int s = 0; s < steps; ++s)
        x = dp.left ? dp.u.apply_inverse(dp.damping.adjoint() * x)
                    : CVector(dp.damping.adjoint() * dp.u.apply_inverse(x));
      return x;
    };
    const auto sv = top_singular_value(pow);
    if (!sv.converged) throw NumericalError("damped_decay_scan: Lanczos did not converge");
    row.damped_norm = sv.value;
    if (row.damped_norm > 0) {
      xs.push_back(std::log(1.0 / row.h));
      ys.push_back(-std::log(row.damped_norm));
    }
    scan.rows.push_back(row);
  }
  if (xs.size() >= 2) {
    const LinearFit f = least_squares(xs, ys);
    scan.decay_fit = f.slope;
    scan.r2 = f.r2;
  }
  return scan;
}

}  // namespace fuplab
