#pragma once

// On-disk formats for diagram and distance caches plus their manifests.
//
//   diagrams:  header "row,dimension,birth,death", one line per pair
//   distances: n lines of n comma-separated values (row-major)
//   manifest:  "key=value" lines, sorted by key
//
// Reals are written with 17 significant digits so that a reload reproduces
// the exact doubles.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "topmix/error.hpp"
#include "topmix/ingestion.hpp"
#include "topmix/persistence.hpp"
#include "topmix/square_matrix.hpp"

namespace topmix {

inline constexpr const char* kLibraryVersion = "0.3.0";

inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// 64-bit FNV-1a, rendered as 16 hex digits.
inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

class Manifest {
 public:
  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  void set(const std::string& key, double value) { entries_[key] = format_real(value); }
  void set(const std::string& key, std::size_t value) { entries_[key] = std::to_string(value); }

  std::optional<std::string> get(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

  void write(std::ostream& os) const {
    for (const auto& [k, v] : entries_) os << k << '=' << v << '\n';
  }

  static Manifest read(std::istream& in) {
    Manifest m;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError("manifest line without '=': " + line);
      m.entries_[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return m;
  }

 private:
  std::map<std::string, std::string> entries_;
};

inline void write_diagrams(std::ostream& os, std::span<const PersistenceDiagram> diagrams) {
  os << "row,dimension,birth,death\n";
  for (std::size_t r = 0; r < diagrams.size(); ++r)
    for (const auto& p : diagrams[r].pairs)
      os << r << ',' << diagrams[r].dimension << ',' << format_real(p.birth) << ',' << format_real(p.death) << '\n';
}

// `rows` diagrams are expected; the cap is not part of the pair records and
// comes from the manifest.
inline std::vector<PersistenceDiagram> read_diagrams(std::istream& in, std::size_t rows, double maxscale) {
  std::vector<PersistenceDiagram> out(rows);
  for (auto& d : out) d.maxscale = maxscale;
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "row,dimension,birth,death")
    throw ParseError("diagram cache: missing header");
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    const auto f = detail::split(line, ',');
    const auto row = f.size() == 4 ? parse_real(f[0]) : std::nullopt;
    const auto dim = f.size() == 4 ? parse_real(f[1]) : std::nullopt;
    const auto b = f.size() == 4 ? parse_real(f[2]) : std::nullopt;
    const auto d = f.size() == 4 ? parse_real(f[3]) : std::nullopt;
    if (!row || !dim || !b || !d || *row < 0 || *row >= static_cast<double>(rows))
      throw ParseError("diagram cache: bad record", n);
    auto& dg = out[static_cast<std::size_t>(*row)];
    dg.dimension = static_cast<int>(*dim);
    dg.pairs.push_back({*b, *d});
    ++n;
  }
  return out;
}

inline void write_matrix(std::ostream& os, const SquareMatrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j) os << ',';
      os << format_real(m(i, j));
    }
    os << '\n';
  }
}

inline SquareMatrix read_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    std::vector<double> r;
    for (const auto f : detail::split(line, ',')) {
      const auto v = parse_real(f);
      if (!v) throw ParseError("distance cache: bad value '" + std::string(f) + "'", rows.size());
      r.push_back(*v);
    }
    rows.push_back(std::move(r));
  }
  SquareMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw ParseError("distance cache: matrix is not square", i);
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace topmix
