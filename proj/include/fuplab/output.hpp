#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "fuplab/partition.hpp"

namespace fuplab {

inline constexpr const char* kVersion = "1.0.0";

// Comma-separated, '.' decimal, one header row, '#' comment lines. The first line
// is "# provenance config_hash=<hex> version=<v> kind=<kind>".
class CsvWriter {
 public:
  using Cell = std::variant<double, long long, std::string>;

  CsvWriter(const std::string& path, const std::vector<std::string>& columns,
            const std::string& config_hash, const std::string& kind);

  void row(const std::vector<Cell>& cells);
  void comment(const std::string& text);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::size_t width_;
  std::ofstream out_;
};

// Shortest round-trip formatting is not needed; 12 significant digits, fixed per value.
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::string> comments;
  std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(const std::string& path);

struct Pgm {
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<std::uint8_t> pixels;  // row-major, top row first
};

// Plain "P2" file.
void write_pgm(const Pgm& image, const std::string& path);
Pgm read_pgm(const std::string& path);

// 255 inside the set; the top image row is the largest xi.
Pgm mask_image(const Mask& mask);
void render_set_mask(const Mask& mask, const std::string& path);

}  // namespace fuplab
