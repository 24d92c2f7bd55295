#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "fuplab/common.hpp"

namespace fuplab {

// Flat key-value configuration with sections:
//
//   # comment
//   [map]
//   epsilon = 0.05
//   [experiment]
//   N = 128 256 512
//
// Keys are addressed as "section.key". Values are typed at access time; every
// diagnostic carries source, line and field name.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& source = "<config>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const;
  // Command-line overrides; recorded with line 0.
  void set(const std::string& key, const std::string& value);

  double get_double(const std::string& key, double def,
                    double lo = -std::numeric_limits<double>::infinity(),
                    double hi = std::numeric_limits<double>::infinity()) const;
  int get_int(const std::string& key, int def, int lo = std::numeric_limits<int>::min(),
              int hi = std::numeric_limits<int>::max()) const;
  bool get_bool(const std::string& key, bool def) const;
  std::string get_string(const std::string& key, const std::string& def,
                         const std::vector<std::string>& choices = {}) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& def,
                                  double lo = -std::numeric_limits<double>::infinity(),
                                  double hi = std::numeric_limits<double>::infinity()) const;
  std::vector<int> get_ints(const std::string& key, const std::vector<int>& def,
                            int lo = std::numeric_limits<int>::min(),
                            int hi = std::numeric_limits<int>::max()) const;

  // Throws for any key never read: catches typos before a long run.
  void check_unused() const;

  // Sorted "key = value" lines; the hash is FNV-1a 64 of this text.
  std::string canonical() const;
  std::uint64_t hash() const;
  std::string hash_hex() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
  };
  const Entry* find(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const Entry& e, const std::string& what) const;

  std::map<std::string, Entry> entries_;
  std::string source_ = "<config>";
};

std::uint64_t fnv1a64(const std::string& text);

}  // namespace fuplab
