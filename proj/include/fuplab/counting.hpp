#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <vector>

#include "fuplab/dynamics.hpp"
#include "fuplab/words.hpp"

namespace fuplab {

using BigCount = boost::multiprecision::cpp_int;

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

// Fraction of letters equal to 1 in a coarse word (unreduced: ones / length).
Rational density(const Word& w);

// A short word is uncontrolled when its density of 1s is strictly below alpha.
bool is_uncontrolled(const Word& w, double alpha);

struct ControlledSplit {
  int short_length = 0;   // N0
  int long_length = 0;    // N = (6 Lambda + 1) N0
  int max_ones = 0;       // uncontrolled short words have at most this many 1s
  BigCount uncontrolled_short;  // |Z^c| = sum_{k < alpha N0} C(N0, k)
  BigCount controlled_short;    // |Z|
  BigCount uncontrolled_long;   // |X| = |Z^c|^{6 Lambda + 1}
  BigCount controlled_long;     // |Y| = 2^N - |X|
};

ControlledSplit controlled_split(int n0, double alpha, int big_lambda);

// Lazily walks the uncontrolled short words in lexicographic order ('*' < '1').
class UncontrolledWords {
 public:
  UncontrolledWords(int n0, double alpha);
  std::optional<Word> next();

 private:
  int n0_;
  int max_ones_;
  std::uint64_t cursor_ = 0;
};

double natural_log(const BigCount& c);

// (1/lambda0 + 2) alpha (1 - log alpha)
double counting_exponent(double alpha, double lambda0);

struct CountingRow {
  double h = 0.0;
  int n0 = 0;
  int n = 0;
  double log_count = 0.0;  // log |X|
  double log_bound = 0.0;  // log(C h^{-exponent}) with the fitted C
};

struct CountingBound {
  double exponent = 0.0;
  double constant = 0.0;  // smallest C with |X| <= C h^{-exponent} on the grid
  std::vector<CountingRow> rows;
};

CountingBound counting_bound(double alpha, const ExpansionRates& rates, const std::vector<double>& hs);

// Largest alpha < 1/2 with counting_exponent(alpha, lambda0) <= beta / 2.
double choose_alpha(double beta, double lambda0);

}  // namespace fuplab
