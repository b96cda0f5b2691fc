#pragma once

//
// ... Standard header files
//
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

//
// ... cglasso header files
//
#include <cglasso/errors.hpp>

namespace cglasso {

  // Running count of floating point operations, used to check the cost
  // model of the recursive solvers.
  struct FlopCounter {
    std::uint64_t flops = 0;
    void add(std::uint64_t n) { flops += n; }
  };

  inline void count(FlopCounter* fc, std::uint64_t n) {
    if (fc) { fc->add(n); }
  }

  // Small dense row-major block with 0-based (row, col) access. Used for
  // the per-column work arrays of the recursions and for oracle-scale
  // dense matrices.
  class DenseBlock {
  public:
    DenseBlock() = default;

    DenseBlock(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

    static DenseBlock identity(std::size_t n) {
      DenseBlock b(n, n);
      for (std::size_t i = 0; i < n; ++i) { b(i, i) = 1.0; }
      return b;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return values_.empty(); }

    double& operator()(std::size_t r, std::size_t c) {
      return values_[r * cols_ + c];
    }
    double operator()(std::size_t r, std::size_t c) const {
      return values_[r * cols_ + c];
    }

    std::span<double> row(std::size_t r) {
      return {values_.data() + r * cols_, cols_};
    }
    std::span<double const> row(std::size_t r) const {
      return {values_.data() + r * cols_, cols_};
    }

    std::span<double const> values() const { return values_; }

    friend bool operator==(DenseBlock const&, DenseBlock const&) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
  };

  namespace dense {

    inline double max_abs_diagonal(DenseBlock const& a) {
      double m = 0.0;
      for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) {
        m = std::max(m, std::abs(a(i, i)));
      }
      return m;
    }

    // In-place lower Cholesky a = G G^T on the lower triangle. Returns
    // false as soon as a pivot is not strictly above pivot_floor; the
    // contents of a are then unspecified.
    inline bool
    cholesky_in_place(DenseBlock& a, double pivot_floor, FlopCounter* fc = nullptr) {
      auto const n = a.rows();
      for (std::size_t j = 0; j < n; ++j) {
        double pivot = a(j, j);
        for (std::size_t k = 0; k < j; ++k) { pivot -= a(j, k) * a(j, k); }
        if (!(pivot > pivot_floor)) { return false; }
        double const g = std::sqrt(pivot);
        a(j, j) = g;
        for (std::size_t i = j + 1; i < n; ++i) {
          double s = a(i, j);
          for (std::size_t k = 0; k < j; ++k) { s -= a(i, k) * a(j, k); }
          a(i, j) = s / g;
        }
        count(fc, 2 * j + 2 * (n - j - 1) * (j + 1));
      }
      return true;
    }

    // Solves (G G^T) x = b in place, G the lower factor from
    // cholesky_in_place.
    inline void
    cholesky_solve(DenseBlock const& g, std::span<double> x, FlopCounter* fc = nullptr) {
      auto const n = g.rows();
      for (std::size_t i = 0; i < n; ++i) {
        double s = x[i];
        for (std::size_t k = 0; k < i; ++k) { s -= g(i, k) * x[k]; }
        x[i] = s / g(i, i);
      }
      for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t k = ii + 1; k < n; ++k) { s -= g(k, ii) * x[k]; }
        x[ii] = s / g(ii, ii);
      }
      count(fc, 2 * n * n);
    }

    inline DenseBlock multiply(DenseBlock const& a, DenseBlock const& b) {
      if (a.cols() != b.rows()) {
        throw DimensionMismatch("dense::multiply: inner dimensions differ");
      }
      DenseBlock c(a.rows(), b.cols());
      for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
          double const aik = a(i, k);
          if (aik == 0.0) { continue; }
          for (std::size_t j = 0; j < b.cols(); ++j) { c(i, j) += aik * b(k, j); }
        }
      }
      return c;
    }

    // Inverse of a symmetric positive definite matrix via Cholesky.
    inline DenseBlock spd_inverse(DenseBlock const& a) {
      auto const n = a.rows();
      DenseBlock g = a;
      if (!cholesky_in_place(g, 0.0)) {
        throw NotPositiveDefinite("spd_inverse: matrix is not positive definite");
      }
      // Invert G in place (lower triangular), then form G^-T G^-1.
      DenseBlock ginv(n, n);
      for (std::size_t j = 0; j < n; ++j) {
        ginv(j, j) = 1.0 / g(j, j);
        for (std::size_t i = j + 1; i < n; ++i) {
          double s = 0.0;
          for (std::size_t k = j; k < i; ++k) { s -= g(i, k) * ginv(k, j); }
          ginv(i, j) = s / g(i, i);
        }
      }
      DenseBlock inv(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          double s = 0.0;
          for (std::size_t k = i; k < n; ++k) { s += ginv(k, i) * ginv(k, j); }
          inv(i, j) = s;
          inv(j, i) = s;
        }
      }
      return inv;
    }

    inline double spd_log_det(DenseBlock const& a) {
      DenseBlock g = a;
      if (!cholesky_in_place(g, 0.0)) {
        throw NotPositiveDefinite("spd_log_det: matrix is not positive definite");
      }
      double ld = 0.0;
      for (std::size_t i = 0; i < g.rows(); ++i) { ld += 2.0 * std::log(g(i, i)); }
      return ld;
    }

  } // namespace dense

} // namespace cglasso
