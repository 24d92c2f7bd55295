#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fuplab/dynamics.hpp"
#include "fuplab/partition.hpp"

namespace fuplab {

// Future words v = v_0..v_{n-1} use times 0..n-1 (symbol a^-_v, set V^-_v);
// past words w = w_1..w_n use times -1..-n (symbol a^+_w, set V^+_w).
enum class Orientation { Future, Past };

struct Word {
  Alphabet alphabet = Alphabet::Coarse;
  std::vector<int> letters;
  Orientation orientation = Orientation::Future;

  std::size_t size() const { return letters.size(); }
  Word reversed() const;
  // Coarse words print as "1**1"; refined words as dot-separated letters "1.7.3".
  std::string str() const;
  static Word parse(const std::string& text, Alphabet alphabet, Orientation orientation);
};

// Concatenation vw keeping v's alphabet and orientation.
Word concat(const Word& v, const Word& w);

// Time at which letter j (0-based position) is evaluated.
inline int letter_time(const Word& w, std::size_t j) {
  return w.orientation == Orientation::Future ? static_cast<int>(j) : -static_cast<int>(j) - 1;
}

double word_symbol_at(const AnosovMapSpec& spec, const Partition& part, const Word& w,
                      const TorusPoint& p);
bool word_set_contains(const AnosovMapSpec& spec, const Partition& part, const Word& w,
                       const TorusPoint& p);

std::vector<double> word_symbol_grid(const AnosovMapSpec& spec, const Partition& part,
                                     const Word& w, const Grid2& grid);
Mask word_set(const AnosovMapSpec& spec, const Partition& part, const Word& w, const Grid2& grid);

struct WordJacobian {
  double value = std::numeric_limits<double>::infinity();  // +inf on the empty set
  bool empty = true;
  std::size_t cells = 0;
  int grid = 0;
};

// inf over V^-_v of J^u_n (future) or over V^+_w of J^s_{-n} (past): grid minimum over
// mask cells, then one 4x4 subdivision around the minimiser.
WordJacobian word_jacobian(const AnosovMapSpec& spec, const Partition& part, const Word& w,
                           int grid_n = 256);

struct EhrenfestTime {
  enum class Status { Found, EmptySet, ExceedsWord };
  Status status = Status::ExceedsWord;
  int m = 0;  // prefix length at which the Jacobian first reaches the threshold
};

// Smallest m with J(prefix of length m) >= h^{-threshold_exponent}. The split
// exponent 1/2 gives the local Ehrenfest time, 1 the doubled one.
EhrenfestTime local_ehrenfest_time(const AnosovMapSpec& spec, const Partition& part,
                                   const Word& w, double h, double threshold_exponent,
                                   int grid_n = 256);

struct ModerateWordsOptions {
  int grid_n = 512;
  std::size_t max_words = 1u << 20;
};

struct ModerateWord {
  Word word;
  double jacobian = 0.0;
  double z = 0.0;  // transverse coordinate of the set, see transverse_coordinate
};

struct ModerateWords {
  double tau = 0.0;
  double threshold = 0.0;            // h^{-tau}
  std::vector<ModerateWord> words;   // nonempty sets, Jacobian crosses the threshold here
  std::vector<Word> empty_words;     // first prefix whose set is empty
  std::vector<Word> unfinished;      // ran out of coarse letters below the threshold
};

// Refined past words q with q_1 = first, q dominated by the coarse word w
// (letter 1 -> 1, star -> 2..Q), stopped at the first length where J^+ >= h^{-tau},
// tau = 1 - 1/(10 Lambda).
ModerateWords moderate_words(const AnosovMapSpec& spec, const Partition& part,
                             const Word& coarse, int first, double h, int big_lambda,
                             const ModerateWordsOptions& opt = {});

// Signed offset of the point of the mask nearest to base, measured along the
// normal of the unstable direction at base.
double transverse_coordinate(const AnosovMapSpec& spec, const Mask& set, const TorusPoint& base);

struct ClusterItem {
  Word word;
  double z = 0.0;
};

struct Cluster {
  double center = 0.0;
  std::vector<std::size_t> members;  // indices into the input
};

// Greedy clustering at scale s = h^{2/3}: items are visited in lexicographic word
// order, joining the first cluster whose centre is within s, else opening a new one.
std::vector<Cluster> cluster_partition(const std::vector<ClusterItem>& items, double h);

// Largest number of clusters whose members come within 2 s of one cluster.
int max_overlapping_clusters(const std::vector<ClusterItem>& items,
                             const std::vector<Cluster>& clusters, double h);

}  // namespace fuplab
