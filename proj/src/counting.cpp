#include "fuplab/counting.hpp"

#include <bit>
#include <cmath>
#include <limits>

namespace fuplab {

Rational density(const Word& w) {
  if (w.alphabet != Alphabet::Coarse) throw InputError("density: coarse word expected");
  if (w.size() == 0) throw InputError("density: empty word");
  std::int64_t ones = 0;
  for (int l : w.letters) ones += l == 1 ? 1 : 0;
  return {ones, static_cast<std::int64_t>(w.size())};
}

bool is_uncontrolled(const Word& w, double alpha) { return density(w).value() < alpha; }

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw InputError("alpha must lie in (0,1)");
}

// Number of 1s allowed in an uncontrolled word: k < alpha n0.
int max_ones_below(int n0, double alpha) {
  int k = static_cast<int>(std::ceil(alpha * n0)) - 1;
  while (k + 1 < alpha * n0) ++k;
  while (k >= 0 && !(k < alpha * n0)) --k;
  return k;
}

BigCount binomial(int n, int k) {
  BigCount r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

ControlledSplit controlled_split(int n0, double alpha, int big_lambda) {
  if (n0 < 1) throw InputError("N0 must be >= 1");
  if (big_lambda < 1) throw InputError("Lambda must be >= 1");
  check_alpha(alpha);
  ControlledSplit s;
  s.short_length = n0;
  s.long_length = (6 * big_lambda + 1) * n0;
  s.max_ones = max_ones_below(n0, alpha);
  for (int k = 0; k <= s.max_ones; ++k) s.uncontrolled_short += binomial(n0, k);
  s.controlled_short = (BigCount(1) << n0) - s.uncontrolled_short;
  s.uncontrolled_long = boost::multiprecision::pow(s.uncontrolled_short, 6 * big_lambda + 1);
  s.controlled_long = (BigCount(1) << s.long_length) - s.uncontrolled_long;
  return s;
}

UncontrolledWords::UncontrolledWords(int n0, double alpha) : n0_(n0) {
  check_alpha(alpha);
  if (n0 < 1 || n0 > 62) throw InputError("UncontrolledWords: N0 must lie in [1, 62]");
  max_ones_ = max_ones_below(n0, alpha);
}

std::optional<Word> UncontrolledWords::next() {
  const std::uint64_t end = std::uint64_t{1} << n0_;
  while (cursor_ < end) {
    const std::uint64_t bits = cursor_++;
    if (std::popcount(bits) > max_ones_) continue;
    Word w{Alphabet::Coarse, std::vector<int>(n0_), Orientation::Future};
    // most significant bit is the first letter, so counting order is lexicographic
    for (int j = 0; j < n0_; ++j) w.letters[j] = (bits >> (n0_ - 1 - j)) & 1 ? 1 : kStar;
    return w;
  }
  return std::nullopt;
}

double natural_log(const BigCount& c) {
  if (c <= 0) return -std::numeric_limits<double>::infinity();
  const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(c)) + 1;
  const unsigned shift = bits > 60 ? bits - 60 : 0;
  const BigCount top = c >> shift;
  return std::log(top.convert_to<double>()) + shift * std::log(2.0);
}

double counting_exponent(double alpha, double lambda0) {
  check_alpha(alpha);
  if (!(lambda0 > 0)) throw InputError("lambda0 must be positive");
  return (1.0 / lambda0 + 2.0) * alpha * (1.0 - std::log(alpha));
}

CountingBound counting_bound(double alpha, const ExpansionRates& rates, const std::vector<double>& hs) {
  CountingBound b;
  b.exponent = counting_exponent(alpha, rates.lambda0);
  double log_c = -std::numeric_limits<double>::infinity();
  for (double h : hs) {
    const PropagationTimes t = propagation_times(h, rates);
    const ControlledSplit s = controlled_split(t.short_time, alpha, rates.big_lambda);
    CountingRow r{h, t.short_time, t.long_time, natural_log(s.uncontrolled_long), 0.0};
    log_c = std::max(log_c, r.log_count - b.exponent * std::log(1.0 / h));
    b.rows.push_back(r);
  }
  b.constant = std::exp(log_c);
  for (auto& r : b.rows) r.log_bound = log_c + b.exponent * std::log(1.0 / r.h);
  return b;
}

double choose_alpha(double beta, double lambda0) {
  if (!(beta > 0)) throw InputError("beta must be positive");
  if (!(lambda0 > 0)) throw InputError("lambda0 must be positive");
  const double target = beta / 2.0;
  auto lhs = [&](double a) { return (1.0 / lambda0 + 2.0) * a * (1.0 - std::log(a)); };
  const double top = std::nextafter(0.5, 0.0);
  if (lhs(top) <= target) return top;
  // lhs is increasing on (0,1)
  double lo = 0.0, hi = top;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (lhs(mid) <= target ? lo : hi) = mid;
  }
  if (lo == 0.0) throw NumericalError("choose_alpha: no admissible alpha");
  return lo;
}

}  // namespace fuplab
