#pragma once

//
// ... Standard header files
//
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

//
// ... cglasso header files
//
#include <cglasso/chordal.hpp>
#include <cglasso/spmat.hpp>

// Synthetic correlation matrices whose thresholded support is a chordal
// embedding of a given pattern.

namespace cglasso {

  // splitmix64, used only to expand a 64-bit seed into generator state.
  class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    std::uint64_t next() {
      std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
      return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
  };

  // xoshiro256** 1.0. Output depends only on the seed, so generated
  // files are identical across platforms.
  class Xoshiro256ss {
  public:
    using result_type = std::uint64_t;

    explicit Xoshiro256ss(std::uint64_t seed) {
      SplitMix64 sm(seed);
      for (auto& w : s_) { w = sm.next(); }
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
      std::uint64_t const result = rotl(s_[1] * 5, 7) * 9;
      std::uint64_t const t = s_[1] << 17;
      s_[2] ^= s_[0];
      s_[3] ^= s_[1];
      s_[1] ^= s_[2];
      s_[0] ^= s_[3];
      s_[2] ^= t;
      s_[3] = rotl(s_[3], 45);
      return result;
    }

    // Uniform in [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> s_{};
  };

  struct GenConfig {
    std::uint64_t seed = 0;
    double edge_low = 0.50;
    double edge_high = 0.55;
    double noise_bound = 0.20;
    // Elevate the diagonal to diagonal dominance and rescale to unit
    // diagonal. Without it the diagonal is set to 1 and PD is not enforced.
    bool normalize = true;
    double margin = 0.01;
    int max_retries = 100;
  };

  struct GenMeta {
    std::uint64_t seed = 0;
    // Seed actually used after retries (attempt 0 uses seed itself).
    std::uint64_t sub_seed = 0;
    int attempts = 0;
    int d = 0;
    std::size_t pattern_edges = 0;
    std::size_t embedded_edges = 0;
    int treewidth = 0;
    // Largest noise magnitude and smallest embedded-edge magnitude in the
    // output, and the midpoint between them.
    double max_noise = 0.0;
    double min_edge = 0.0;
    double recommended_lambda = 0.0;
    GenConfig config;
  };

  struct GenResult {
    SymSparseMatrix sigma;
    SparsityPattern embedded;
    GenMeta meta;
  };

  inline void validate(GenConfig const& c) {
    if (!(0.0 < c.noise_bound && c.noise_bound < c.edge_low && c.edge_low < c.edge_high &&
          c.edge_high < 1.0)) {
      throw std::invalid_argument("gen: need 0 < noise_bound < edge_low < edge_high < 1");
    }
    if (!(c.margin > 0.0)) { throw std::invalid_argument("gen: margin must be positive"); }
  }

  // Seed of retry attempt a.
  inline std::uint64_t attempt_seed(std::uint64_t seed, int attempt) {
    return attempt == 0 ? seed : seed ^ (static_cast<std::uint64_t>(attempt) * 0xD1B54A32D192ED03ull);
  }

  // Off-diagonals are drawn row by row over pairs i < j: an embedded edge
  // takes a magnitude in [edge_low, edge_high] and then a sign (negative
  // when the second draw is below 1/2); any other pair takes a value in
  // [-noise_bound, noise_bound].
  inline GenResult generate(SparsityPattern const& pattern, GenConfig const& cfg) {
    validate(cfg);
    int const d = pattern.dim();
    auto const n = static_cast<std::size_t>(d);
    auto completion = chordal_completion(pattern);
    auto const& emb = completion.completed;
    auto tree = symbolic_factor(emb, completion.ordering);

    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
      std::uint64_t const sub = attempt_seed(cfg.seed, attempt);
      Xoshiro256ss rng(sub);
      std::vector<double> a(n * n, 0.0);
      for (int i = 1; i <= d; ++i) {
        for (int j = i + 1; j <= d; ++j) {
          double v;
          if (emb.has_edge(i, j)) {
            double const mag = rng.uniform(cfg.edge_low, cfg.edge_high);
            v = rng.uniform() < 0.5 ? -mag : mag;
          } else {
            v = rng.uniform(-cfg.noise_bound, cfg.noise_bound);
          }
          a[(i - 1) * n + (j - 1)] = v;
          a[(j - 1) * n + (i - 1)] = v;
        }
      }

      std::vector<double> scale(n, 1.0);
      if (cfg.normalize) {
        for (std::size_t i = 0; i < n; ++i) {
          double s = cfg.margin;
          for (std::size_t j = 0; j < n; ++j) { s += std::abs(a[i * n + j]); }
          scale[i] = 1.0 / std::sqrt(s);
        }
      }

      std::vector<Entry> entries;
      double max_noise = 0.0;
      double min_edge = std::numeric_limits<double>::infinity();
      for (int i = 1; i <= d; ++i) {
        for (int j = i + 1; j <= d; ++j) {
          double const v = a[(i - 1) * n + (j - 1)] * scale[i - 1] * scale[j - 1];
          if (v != 0.0) { entries.push_back({i, j, v}); }
          if (emb.has_edge(i, j)) {
            min_edge = std::min(min_edge, std::abs(v));
          } else {
            max_noise = std::max(max_noise, std::abs(v));
          }
        }
      }
      if (emb.num_edges() == 0) { min_edge = 1.0; }
      if (!(max_noise < min_edge)) { continue; }

      GenResult r{SymSparseMatrix(std::vector<double>(n, 1.0), entries), emb, {}};
      r.meta.seed = cfg.seed;
      r.meta.sub_seed = sub;
      r.meta.attempts = attempt + 1;
      r.meta.d = d;
      r.meta.pattern_edges = pattern.num_edges();
      r.meta.embedded_edges = emb.num_edges();
      r.meta.treewidth = treewidth(tree);
      r.meta.max_noise = max_noise;
      r.meta.min_edge = min_edge;
      r.meta.recommended_lambda = 0.5 * (max_noise + min_edge);
      r.meta.config = cfg;
      return r;
    }
    throw std::runtime_error("gen: edge and noise magnitudes overlap after rescaling on every retry");
  }

  // Band pattern: i ~ j whenever 0 < |i - j| <= bandwidth. Chordal, and
  // the natural order is a perfect elimination ordering.
  inline SparsityPattern banded_pattern(int d, int bandwidth) {
    if (d < 0 || bandwidth < 0) { throw std::invalid_argument("banded_pattern: negative size"); }
    std::vector<Edge> edges;
    for (int i = 1; i <= d; ++i) {
      for (int j = i + 1; j <= std::min(d, i + bandwidth); ++j) { edges.push_back({i, j}); }
    }
    return SparsityPattern(d, std::move(edges));
  }

} // namespace cglasso
