#pragma once

//
// ... Standard header files
//
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

//
// ... cglasso header files
//
#include <cglasso/errors.hpp>
#include <cglasso/spmat.hpp>

// Matrix Market coordinate I/O. Symmetric matrices are written as their
// lower triangle (including the diagonal) with 17 significant digits so
// that a write/read cycle reproduces every double exactly.

namespace cglasso::mm {

  namespace detail {

    inline std::string format_double(double v) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return buf;
    }

    inline std::string lower(std::string s) {
      for (auto& c : s) { c = static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }
      return s;
    }

    struct Header {
      std::string format;   // coordinate | array
      std::string field;    // real | integer | pattern
      std::string symmetry; // symmetric | general
    };

    inline Header read_header(std::istream& in) {
      std::string line;
      if (!std::getline(in, line)) { throw FormatError("Matrix Market: empty input"); }
      std::istringstream hs(line);
      std::string banner, object, format, field, symmetry;
      hs >> banner >> object >> format >> field >> symmetry;
      if (banner != "%%MatrixMarket" || lower(object) != "matrix") {
        throw FormatError("Matrix Market: missing banner");
      }
      Header h{lower(format), lower(field), lower(symmetry)};
      if (h.format != "coordinate" && h.format != "array") {
        throw FormatError("Matrix Market: unsupported format " + format);
      }
      if (h.field != "real" && h.field != "integer" && h.field != "pattern" &&
          h.field != "double") {
        throw FormatError("Matrix Market: unsupported field " + field);
      }
      if (h.symmetry != "symmetric" && h.symmetry != "general") {
        throw FormatError("Matrix Market: unsupported symmetry " + symmetry);
      }
      return h;
    }

    inline bool next_data_line(std::istream& in, std::string& line) {
      while (std::getline(in, line)) {
        auto p = line.find_first_not_of(" \t\r");
        if (p == std::string::npos || line[p] == '%') { continue; }
        return true;
      }
      return false;
    }

    inline double parse_double(std::string const& tok) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw FormatError("Matrix Market: bad number '" + tok + "'");
      }
      return v;
    }

    // Coordinate triplets with 1-based indices; off-diagonals folded to
    // i > j. For "general" input both triangles must agree.
    struct Coordinates {
      int d = 0;
      std::vector<double> diag;
      std::map<std::pair<int, int>, double> lower;
      bool pattern_only = false;
    };

    inline Coordinates read_coordinates(std::istream& in) {
      auto h = read_header(in);
      if (h.format != "coordinate") { throw FormatError("Matrix Market: expected coordinate format"); }
      std::string line;
      if (!next_data_line(in, line)) { throw FormatError("Matrix Market: missing size line"); }
      std::istringstream ss(line);
      long rows = 0, cols = 0, nnz = 0;
      if (!(ss >> rows >> cols >> nnz) || rows != cols || rows < 0 || nnz < 0) {
        throw FormatError("Matrix Market: expected square size line");
      }
      Coordinates c;
      c.d = static_cast<int>(rows);
      c.diag.assign(static_cast<std::size_t>(rows), 0.0);
      c.pattern_only = h.field == "pattern";
      for (long k = 0; k < nnz; ++k) {
        if (!next_data_line(in, line)) { throw FormatError("Matrix Market: truncated entries"); }
        std::istringstream es(line);
        long i = 0, j = 0;
        std::string tok;
        if (!(es >> i >> j)) { throw FormatError("Matrix Market: bad entry line"); }
        double v = 1.0;
        if (!c.pattern_only) {
          if (!(es >> tok)) { throw FormatError("Matrix Market: missing value"); }
          v = parse_double(tok);
        }
        if (i < 1 || j < 1 || i > rows || j > rows) {
          throw FormatError("Matrix Market: entry index out of range");
        }
        if (i == j) {
          c.diag[i - 1] = v;
          continue;
        }
        auto key = i > j ? std::pair<int, int>(i, j) : std::pair<int, int>(j, i);
        auto [it, inserted] = c.lower.emplace(key, v);
        if (!inserted) {
          if (h.symmetry == "symmetric" || it->second != v) {
            throw FormatError("Matrix Market: duplicate or asymmetric entry");
          }
        }
      }
      return c;
    }

  } // namespace detail

  inline SymSparseMatrix read_matrix(std::istream& in) {
    auto c = detail::read_coordinates(in);
    std::vector<Entry> entries;
    entries.reserve(c.lower.size());
    for (auto const& [key, v] : c.lower) { entries.push_back({key.second, key.first, v}); }
    return SymSparseMatrix(std::move(c.diag), entries);
  }

  // Structure only; any field type is accepted and values are ignored.
  inline SparsityPattern read_pattern(std::istream& in) {
    auto c = detail::read_coordinates(in);
    std::vector<Edge> edges;
    edges.reserve(c.lower.size());
    for (auto const& [key, v] : c.lower) {
      if (c.pattern_only || v != 0.0) { edges.push_back({key.second, key.first}); }
    }
    return SparsityPattern(c.d, std::move(edges));
  }

  inline void write_matrix(std::ostream& out, SymSparseMatrix const& m) {
    int const d = m.dim();
    // Column-major lower triangle.
    std::vector<std::vector<std::pair<int, double>>> cols(static_cast<std::size_t>(d));
    for (auto const& e : m.entries()) { cols[e.i - 1].emplace_back(e.j, e.value); }
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << d << ' ' << d << ' ' << (static_cast<std::size_t>(d) + m.pattern().num_edges()) << '\n';
    for (int j = 1; j <= d; ++j) {
      out << j << ' ' << j << ' ' << detail::format_double(m.diagonal()[j - 1]) << '\n';
      for (auto const& [i, v] : cols[j - 1]) {
        out << i << ' ' << j << ' ' << detail::format_double(v) << '\n';
      }
    }
  }

  inline void write_pattern(std::ostream& out, SparsityPattern const& e) {
    out << "%%MatrixMarket matrix coordinate pattern symmetric\n";
    out << e.dim() << ' ' << e.dim() << ' ' << e.num_edges() << '\n';
    for (int j = 1; j <= e.dim(); ++j) {
      for (int i : e.higher_neighbors(j)) { out << i << ' ' << j << '\n'; }
    }
  }

  // Strictly lower triangular matrix in coordinate general form (used for
  // the unit lower factor L with its diagonal omitted).
  inline void
  write_lower(std::ostream& out, int d, std::vector<Entry> const& entries) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << d << ' ' << d << ' ' << entries.size() << '\n';
    for (auto const& e : entries) {
      out << e.i << ' ' << e.j << ' ' << detail::format_double(e.value) << '\n';
    }
  }

  inline void write_vector(std::ostream& out, std::vector<double> const& v) {
    out << "%%MatrixMarket matrix array real general\n";
    out << v.size() << " 1\n";
    for (double x : v) { out << detail::format_double(x) << '\n'; }
  }

  inline std::vector<double> read_vector(std::istream& in) {
    auto h = detail::read_header(in);
    if (h.format != "array") { throw FormatError("Matrix Market: expected array format"); }
    std::string line;
    if (!detail::next_data_line(in, line)) { throw FormatError("Matrix Market: missing size line"); }
    std::istringstream ss(line);
    long rows = 0, cols = 0;
    if (!(ss >> rows >> cols) || cols != 1 || rows < 0) {
      throw FormatError("Matrix Market: expected a column vector");
    }
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(rows));
    for (long k = 0; k < rows; ++k) {
      if (!detail::next_data_line(in, line)) { throw FormatError("Matrix Market: truncated array"); }
      std::istringstream es(line);
      std::string tok;
      es >> tok;
      v.push_back(detail::parse_double(tok));
    }
    return v;
  }

  // ---------------------------------------------------------------------
  // File helpers

  inline SymSparseMatrix load_matrix(std::filesystem::path const& p) {
    std::ifstream in(p);
    if (!in) { throw std::runtime_error("cannot open " + p.string()); }
    return read_matrix(in);
  }

  inline SparsityPattern load_pattern(std::filesystem::path const& p) {
    std::ifstream in(p);
    if (!in) { throw std::runtime_error("cannot open " + p.string()); }
    return read_pattern(in);
  }

  inline void save_matrix(std::filesystem::path const& p, SymSparseMatrix const& m) {
    std::ofstream out(p, std::ios::binary);
    if (!out) { throw std::runtime_error("cannot write " + p.string()); }
    write_matrix(out, m);
  }

  inline void save_pattern(std::filesystem::path const& p, SparsityPattern const& e) {
    std::ofstream out(p, std::ios::binary);
    if (!out) { throw std::runtime_error("cannot write " + p.string()); }
    write_pattern(out, e);
  }

} // namespace cglasso::mm
