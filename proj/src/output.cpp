#include "fuplab/output.hpp"

#include <cstdio>
#include <sstream>

namespace fuplab {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns,
                     const std::string& config_hash, const std::string& kind)
    : path_(path), width_(columns.size()), out_(path) {
  if (!out_) throw std::runtime_error("cannot write '" + path + "'");
  out_ << "# provenance config_hash=" << config_hash << " version=" << kVersion << " kind=" << kind << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != width_) throw std::logic_error("CsvWriter: row width mismatch in " + path_);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ",";
    if (const auto* d = std::get_if<double>(&cells[i]))
      out_ << format_number(*d);
    else if (const auto* n = std::get_if<long long>(&cells[i]))
      out_ << *n;
    else
      out_ << std::get<std::string>(cells[i]);
  }
  out_ << "\n";
  if (!out_) throw std::runtime_error("write failed for '" + path_ + "'");
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << "\n"; }

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(s);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    return out;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line);
    } else if (t.header.empty()) {
      t.header = split(line);
    } else {
      t.rows.push_back(split(line));
    }
  }
  return t;
}

void write_pgm(const Pgm& img, const std::string& path) {
  if (img.width <= 0 || img.height <= 0 ||
      img.pixels.size() != static_cast<std::size_t>(img.width) * img.height)
    throw std::invalid_argument("write_pgm: pixel count does not match width x height");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "P2\n" << img.width << " " << img.height << "\n" << img.maxval << "\n";
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      if (c) out << ' ';
      out << static_cast<int>(img.pixels[static_cast<std::size_t>(r) * img.width + c]);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

Pgm read_pgm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  // strip comments, then read whitespace-separated tokens
  std::stringstream body;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    body << line << '\n';
  }
  std::string magic;
  Pgm img;
  body >> magic >> img.width >> img.height >> img.maxval;
  if (magic != "P2" || !body || img.width <= 0 || img.height <= 0 || img.maxval <= 0 || img.maxval > 255)
    throw std::runtime_error("read_pgm: '" + path + "' is not a plain 8-bit PGM");
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  for (auto& p : img.pixels) {
    int v;
    if (!(body >> v) || v < 0 || v > img.maxval) throw std::runtime_error("read_pgm: bad pixel in '" + path + "'");
    p = static_cast<std::uint8_t>(v);
  }
  return img;
}

Pgm mask_image(const Mask& mask) {
  Pgm img;
  img.width = img.height = mask.grid.n;
  img.pixels.resize(mask.grid.size());
  for (int r = 0; r < img.height; ++r)
    for (int i = 0; i < img.width; ++i)
      img.pixels[static_cast<std::size_t>(r) * img.width + i] = mask.at(i, img.height - 1 - r) ? 255 : 0;
  return img;
}

void render_set_mask(const Mask& mask, const std::string& path) { write_pgm(mask_image(mask), path); }

}  // namespace fuplab
