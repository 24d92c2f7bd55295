#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "fuplab/dynamics.hpp"
#include "fuplab/linalg.hpp"
#include "fuplab/partition.hpp"
#include "fuplab/words.hpp"

namespace fuplab {

struct HilbertSpace {
  int N = 2;
  double h() const { return 1.0 / (kTwoPi * N); }
  // Even N >= 2; odd N is rejected with the nearest admissible suggestion.
  static HilbertSpace make(int N);
};

struct Operator {
  CMatrix matrix;
  std::string label;
  bool hermitian = false;
  bool unitary = false;
};

// Sets the hermitian flag by a residual check (1e-10); `unitary` is passed through.
Operator make_operator(CMatrix m, std::string label, bool unitary = false);

// T(k) psi_j = e^{2 pi i k1 j / N} e^{pi i k1 k2 / N} psi_{j + k2}: the quantization of
// e^{2 pi i (k1 x + k2 xi)}.
CMatrix translation_operator(const HilbertSpace& space, int k1, int k2);

enum class Quantization { Weyl, AntiWick };

struct QuantizeOptions {
  Quantization flavor = Quantization::Weyl;
  double band_tolerance = 1e-10;  // allowed relative L^2 energy at |k| >= N/2
  bool allow_truncation = false;  // otherwise a band-limit breach throws
  int sample_size = 0;            // symbol samples per side; 0 = max(2N, 128)
};

struct QuantizeReport {
  double tail_fraction = 0.0;
  bool truncated = false;
};

Operator quantize_observable(const Symbol& a, const HilbertSpace& space,
                             const QuantizeOptions& opt = {}, QuantizeReport* report = nullptr);

// Exact quantization of the integer linear part times the kick, kept in factored form:
// position-diagonal chirps for [[1,0],[q,1]], momentum-diagonal chirps for [[1,q],[0,1]],
// parity for -I, and the kick phase exp(2 pi i N epsilon g(x_j)).
class Propagator {
 public:
  Propagator(const AnosovMapSpec& spec, const HilbertSpace& space);

  int dimension() const { return N_; }
  CVector apply(const CVector& v) const;
  CVector apply_inverse(const CVector& v) const;
  // U^t X for signed t, column by column.
  CMatrix apply_power(const CMatrix& x, int t) const;
  CMatrix dense() const;

  struct Factor {
    enum class Kind { PositionPhase, MomentumPhase, Parity };
    Kind kind;
    std::vector<cdouble> phase;
  };
  // Applied first to last.
  const std::vector<Factor>& factors() const { return factors_; }

 private:
  void apply_factor(const Factor& f, CMatrix& x, bool inverse) const;

  int N_;
  std::vector<Factor> factors_;
};

Operator propagator(const AnosovMapSpec& spec, const HilbertSpace& space);

// A(t) = U^{-t} A U^{t}.
Operator heisenberg(const Operator& a, const Propagator& u, int t);

struct EgorovResult {
  double discrepancy = 0.0;
  double tail_fraction = 0.0;  // band-limit breach of a o phi_t, flagged not fatal
  bool band_limited = true;
};
EgorovResult egorov_discrepancy(const AnosovMapSpec& spec, const Symbol& a,
                                const HilbertSpace& space, int t);

// Letter operators quantized on first use and cached, reused for every word.
class WordOperators {
 public:
  WordOperators(const AnosovMapSpec& spec, const Partition& part, const HilbertSpace& space,
                Alphabet alphabet, const QuantizeOptions& opt = truncating());

  const Propagator& propagator() const { return u_; }
  const CMatrix& letter(int l) const;
  // A^-_v = A_{v_{n-1}}(n-1) ... A_{v_0}(0) or A^+_w = A_{w_1}(-1) ... A_{w_n}(-n).
  Operator build(const Word& w) const;
  // The unitarily equivalent chain A_{v_{n-1}} U ... U A_{v_0} (future) used for norms.
  LinearOperator chain(const Word& w) const;
  double norm(const Word& w) const;

  static QuantizeOptions truncating() {
    QuantizeOptions o;
    o.allow_truncation = true;
    return o;
  }

 private:
  Propagator u_;
  Partition part_;
  HilbertSpace space_;
  Alphabet alphabet_;
  QuantizeOptions opt_;
  std::vector<int> ids_;
  mutable std::vector<std::unique_ptr<CMatrix>> ops_;
  mutable std::unique_ptr<std::mutex> lock_ = std::make_unique<std::mutex>();
};

Operator word_operator(const AnosovMapSpec& spec, const Partition& part, const Word& w,
                       const HilbertSpace& space);

enum class WordPolicy { AllStar, WorstOfSample };

struct KeyEstimateOptions {
  WordPolicy policy = WordPolicy::AllStar;
  int samples = 64;
  unsigned seed = 1;
  double length_factor = 7.0 / 6.0;
};

struct KeyEstimateRow {
  int N = 0;
  double h = 0.0;
  int word_length = 0;
  double norm = 0.0;
  double beta_fit_partial = 0.0;  // fit over rows up to this one (0 until two rows)
  std::string word;
};

struct KeyEstimateScan {
  std::vector<KeyEstimateRow> rows;
  double beta_fit = 0.0;
  double r2 = 0.0;
};

// Word length n(N): the smallest integer n0 > log(1/h) / lambda0, scaled by factor and
// rounded up. Rounding before scaling keeps n(N) strictly increasing along doubling N.
int key_word_length(double h, double lambda0, double factor);

KeyEstimateScan key_estimate_scan(const AnosovMapSpec& spec, const Partition& part,
                                  const std::vector<int>& Ns, const ExpansionRates& rates,
                                  const KeyEstimateOptions& opt = {});

struct EigenPair {
  cdouble value;
  CVector vector;
};

struct EigenSystem {
  std::vector<EigenPair> pairs;  // by modulus descending, then phase ascending
  double max_residual = 0.0;
};
EigenSystem eigensystem(const CMatrix& a);

// <Op(a) u, u> for each observable.
std::vector<cdouble> semiclassical_measure(const CVector& u, const std::vector<Operator>& observables);

struct MassRow {
  int N = 0;
  double min_mass = 0.0;
  double argmin_phase = 0.0;
  int eigencount = 0;
};
std::vector<MassRow> mass_scan(const AnosovMapSpec& spec, const Symbol& a, const std::vector<int>& Ns,
                               Quantization flavor = Quantization::Weyl);

struct DampedSpec {
  Symbol b;            // damping, b >= 0
  bool left = false;   // Op(e^{-b}) U instead of U Op(e^{-b})
};

// eta = min of b over the sampled support of a_1.
double damping_eta(const DampedSpec& d, const Partition& part, int grid_n = 256);

struct DampedPropagator {
  Propagator u;
  CMatrix damping;  // Op(e^{-b})
  bool left = false;
  CVector apply(const CVector& v) const;
  CMatrix dense() const;
};
DampedPropagator damped_propagator(const AnosovMapSpec& spec, const DampedSpec& d,
                                   const HilbertSpace& space);

struct DampedRow {
  int N = 0;
  double h = 0.0;
  int steps = 0;
  double damped_norm = 0.0;        // ||U~^n||
  double spectral_radius = 0.0;
  double max_singular = 0.0;       // of U~ itself
  double alpha1 = 0.0;
};

struct DampedScan {
  std::vector<DampedRow> rows;
  double eta = 0.0;
  double alpha1 = 0.0;  // alpha eta / (6 lambda1)
  double beta1 = 0.0;   // min(beta/2, alpha1, 1/4)
  double decay_fit = 0.0;
  double r2 = 0.0;
};

double damped_alpha1(double alpha, double eta, double lambda1);
double damped_beta1(double beta, double alpha1);

DampedScan damped_decay_scan(const AnosovMapSpec& spec, const DampedSpec& d, const Partition& part,
                             const std::vector<int>& Ns, const ExpansionRates& rates, double alpha,
                             double beta, double length_factor = 7.0 / 6.0);

}  // namespace fuplab
