#include "fuplab/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fuplab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (const char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return errno == 0 && end == s.c_str() + s.size();
}

bool parse_long(const std::string& s, long long& out) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtoll(s.c_str(), &end, 10);
  return errno == 0 && end == s.c_str() + s.size();
}

std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : s) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!cur.empty()) out.push_back(cur), cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string range_text(double lo, double hi) {
  std::ostringstream os;
  os << "[" << lo << ", " << hi << "]";
  return os.str();
}

}  // namespace

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Config Config::parse(const std::string& text, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  auto error = [&](const std::string& what) {
    throw InputError(source + ":" + std::to_string(line) + ": " + what);
  };
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    if (const auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') error("unterminated section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      if (!valid_name(section)) error("bad section name '" + section + "'");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) error("expected 'key = value', got '" + s + "'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (!valid_name(key)) error("bad key '" + key + "'");
    if (section.empty()) error("key '" + key + "' appears before any [section]");
    const std::string full = section + "." + key;
    if (cfg.entries_.count(full))
      error("duplicate field '" + full + "' (first set on line " + std::to_string(cfg.entries_[full].line) + ")");
    if (value.empty()) error("field '" + full + "' has no value");
    cfg.entries_[full] = Entry{value, line};
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

void Config::set(const std::string& key, const std::string& value) {
  const auto dot = key.find('.');
  if (dot == std::string::npos || !valid_name(key.substr(0, dot)) || !valid_name(key.substr(dot + 1)))
    throw InputError("override '" + key + "': expected section.key");
  entries_[key] = Entry{value, 0};
}

const Config::Entry* Config::find(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  it->second.used = true;
  return &it->second;
}

void Config::fail(const std::string& key, const Entry& e, const std::string& what) const {
  const std::string where = e.line > 0 ? source_ + ":" + std::to_string(e.line) : std::string("<command line>");
  throw InputError(where + ": field '" + key + "': " + what + " (got '" + e.value + "')");
}

double Config::get_double(const std::string& key, double def, double lo, double hi) const {
  const Entry* e = find(key);
  if (!e) return def;
  double v;
  if (!parse_double(e->value, v)) fail(key, *e, "expected a number");
  if (!(v >= lo && v <= hi)) fail(key, *e, "out of range " + range_text(lo, hi));
  return v;
}

int Config::get_int(const std::string& key, int def, int lo, int hi) const {
  const Entry* e = find(key);
  if (!e) return def;
  long long v;
  if (!parse_long(e->value, v)) fail(key, *e, "expected an integer");
  if (v < lo || v > hi) fail(key, *e, "out of range " + range_text(lo, hi));
  return static_cast<int>(v);
}

bool Config::get_bool(const std::string& key, bool def) const {
  const Entry* e = find(key);
  if (!e) return def;
  if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
  if (e->value == "false" || e->value == "no" || e->value == "0") return false;
  fail(key, *e, "expected true/false");
}

std::string Config::get_string(const std::string& key, const std::string& def,
                               const std::vector<std::string>& choices) const {
  const Entry* e = find(key);
  if (!e) return def;
  if (!choices.empty()) {
    for (const auto& c : choices)
      if (c == e->value) return e->value;
    std::string list;
    for (const auto& c : choices) list += (list.empty() ? "" : "|") + c;
    fail(key, *e, "expected one of " + list);
  }
  return e->value;
}

std::vector<double> Config::get_doubles(const std::string& key, const std::vector<double>& def, double lo,
                                        double hi) const {
  const Entry* e = find(key);
  if (!e) return def;
  std::vector<double> out;
  for (const auto& t : tokens(e->value)) {
    double v;
    if (!parse_double(t, v)) fail(key, *e, "expected a list of numbers, bad item '" + t + "'");
    if (!(v >= lo && v <= hi)) fail(key, *e, "item " + t + " out of range " + range_text(lo, hi));
    out.push_back(v);
  }
  if (out.empty()) fail(key, *e, "empty list");
  return out;
}

std::vector<int> Config::get_ints(const std::string& key, const std::vector<int>& def, int lo, int hi) const {
  const Entry* e = find(key);
  if (!e) return def;
  std::vector<int> out;
  for (const auto& t : tokens(e->value)) {
    long long v;
    if (!parse_long(t, v)) fail(key, *e, "expected a list of integers, bad item '" + t + "'");
    if (v < lo || v > hi) fail(key, *e, "item " + t + " out of range " + range_text(lo, hi));
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) fail(key, *e, "empty list");
  return out;
}

void Config::check_unused() const {
  for (const auto& [key, e] : entries_)
    if (!e.used) {
      const std::string where = e.line > 0 ? source_ + ":" + std::to_string(e.line) : std::string("<command line>");
      throw InputError(where + ": unknown field '" + key + "' for this experiment");
    }
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [key, e] : entries_) out += key + " = " + e.value + "\n";
  return out;
}

std::uint64_t Config::hash() const { return fnv1a64(canonical()); }

std::string Config::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

}  // namespace fuplab
