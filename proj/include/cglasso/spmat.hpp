#pragma once

//
// ... Standard header files
//
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

//
// ... cglasso header files
//
#include <cglasso/dense.hpp>
#include <cglasso/errors.hpp>

// Sparse symmetric matrices and patterns.
//
// All vertex labels in the public API are 1-based: a d x d matrix has
// rows and columns 1..d. The diagonal is always structurally present;
// patterns describe off-diagonal support only.

namespace cglasso {

  // Sorted set of distinct 1-based labels.
  class IndexSet {
  public:
    IndexSet() = default;

    // Sorts and removes duplicates. Labels must be positive.
    explicit IndexSet(std::vector<int> labels) : labels_(std::move(labels)) {
      std::ranges::sort(labels_);
      labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
      if (!labels_.empty() && labels_.front() < 1) {
        throw std::out_of_range("IndexSet: labels are 1-based");
      }
    }

    IndexSet(std::initializer_list<int> labels)
      : IndexSet(std::vector<int>(labels)) {}

    static IndexSet range(int first, int last) {
      std::vector<int> v;
      for (int i = first; i <= last; ++i) { v.push_back(i); }
      return IndexSet(std::move(v));
    }

    std::size_t size() const { return labels_.size(); }
    bool empty() const { return labels_.empty(); }
    int operator[](std::size_t k) const { return labels_[k]; }
    int front() const { return labels_.front(); }
    int back() const { return labels_.back(); }
    auto begin() const { return labels_.begin(); }
    auto end() const { return labels_.end(); }
    std::vector<int> const& labels() const { return labels_; }

    bool contains(int i) const { return std::ranges::binary_search(labels_, i); }

    // 0-based rank of label i within the set.
    std::optional<std::size_t> position(int i) const {
      auto it = std::ranges::lower_bound(labels_, i);
      if (it == labels_.end() || *it != i) { return std::nullopt; }
      return static_cast<std::size_t>(it - labels_.begin());
    }

    friend bool operator==(IndexSet const&, IndexSet const&) = default;

  private:
    std::vector<int> labels_;
  };

  // Unordered pair stored with i < j.
  struct Edge {
    int i;
    int j;
    friend auto operator<=>(Edge const&, Edge const&) = default;
  };

  // Bijection q on 1..d. A vertex with label v is moved to position q(v).
  class Permutation {
  public:
    Permutation() = default;

    explicit Permutation(std::vector<int> forward) : forward_(std::move(forward)) {
      auto const d = forward_.size();
      inverse_.assign(d, 0);
      for (std::size_t v = 0; v < d; ++v) {
        int const p = forward_[v];
        if (p < 1 || static_cast<std::size_t>(p) > d || inverse_[p - 1] != 0) {
          throw std::invalid_argument("Permutation: not a bijection on 1..d");
        }
        inverse_[p - 1] = static_cast<int>(v + 1);
      }
    }

    static Permutation identity(int d) {
      std::vector<int> f(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) { f[i] = i + 1; }
      return Permutation(std::move(f));
    }

    // order[k] is the label placed at position k+1.
    static Permutation from_order(std::span<int const> order) {
      std::vector<int> f(order.size(), 0);
      for (std::size_t k = 0; k < order.size(); ++k) {
        int const v = order[k];
        if (v < 1 || static_cast<std::size_t>(v) > order.size()) {
          throw std::invalid_argument("Permutation::from_order: label out of range");
        }
        f[v - 1] = static_cast<int>(k + 1);
      }
      return Permutation(std::move(f));
    }

    int size() const { return static_cast<int>(forward_.size()); }
    int operator()(int v) const { return forward_[v - 1]; }
    int inverse(int p) const { return inverse_[p - 1]; }
    Permutation inverse() const { return Permutation(inverse_); }

    // Labels in position order.
    std::vector<int> const& order() const { return inverse_; }
    std::vector<int> const& forward() const { return forward_; }

    bool is_identity() const {
      for (std::size_t v = 0; v < forward_.size(); ++v) {
        if (forward_[v] != static_cast<int>(v + 1)) { return false; }
      }
      return true;
    }

    friend bool operator==(Permutation const& a, Permutation const& b) {
      return a.forward_ == b.forward_;
    }

  private:
    std::vector<int> forward_;
    std::vector<int> inverse_;
  };

  // Symmetric off-diagonal support of a d x d matrix. Every undirected
  // edge carries a stable id (its rank in lexicographic (i<j) order),
  // which SymSparseMatrix uses to address values.
  class SparsityPattern {
  public:
    SparsityPattern() = default;

    explicit SparsityPattern(int d) : d_(d), adj_(d), adj_edge_(d) {
      if (d < 0) { throw std::invalid_argument("SparsityPattern: negative dimension"); }
    }

    // Self loops are ignored, duplicates merged.
    SparsityPattern(int d, std::vector<Edge> edges) : SparsityPattern(d) {
      for (auto& e : edges) {
        if (e.i < 1 || e.j < 1 || e.i > d || e.j > d) {
          throw std::out_of_range("SparsityPattern: edge label out of range");
        }
        if (e.i > e.j) { std::swap(e.i, e.j); }
      }
      std::erase_if(edges, [](Edge const& e) { return e.i == e.j; });
      std::ranges::sort(edges);
      edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
      edges_ = std::move(edges);

      std::vector<std::vector<std::pair<int, std::size_t>>> nb(d);
      for (std::size_t id = 0; id < edges_.size(); ++id) {
        nb[edges_[id].i - 1].emplace_back(edges_[id].j, id);
        nb[edges_[id].j - 1].emplace_back(edges_[id].i, id);
      }
      for (int v = 0; v < d; ++v) {
        std::ranges::sort(nb[v]);
        std::vector<int> labels;
        labels.reserve(nb[v].size());
        adj_edge_[v].reserve(nb[v].size());
        for (auto [u, id] : nb[v]) {
          labels.push_back(u);
          adj_edge_[v].push_back(id);
        }
        adj_[v] = IndexSet(std::move(labels));
      }
    }

    static SparsityPattern complete(int d) {
      std::vector<Edge> e;
      for (int i = 1; i <= d; ++i) {
        for (int j = i + 1; j <= d; ++j) { e.push_back({i, j}); }
      }
      return SparsityPattern(d, std::move(e));
    }

    int dim() const { return d_; }
    std::size_t num_edges() const { return edges_.size(); }
    std::vector<Edge> const& edges() const { return edges_; }
    IndexSet const& neighbors(int j) const { return adj_[j - 1]; }
    std::size_t degree(int j) const { return adj_[j - 1].size(); }

    std::optional<std::size_t> edge_id(int i, int j) const {
      if (i == j) { return std::nullopt; }
      auto pos = adj_[i - 1].position(j);
      if (!pos) { return std::nullopt; }
      return adj_edge_[i - 1][*pos];
    }

    bool has_edge(int i, int j) const { return edge_id(i, j).has_value(); }

    // Neighbors of j with label greater than j.
    std::span<int const> higher_neighbors(int j) const {
      auto const& n = adj_[j - 1].labels();
      auto it = std::ranges::upper_bound(n, j);
      return {n.data() + (it - n.begin()), static_cast<std::size_t>(n.end() - it)};
    }

    friend bool operator==(SparsityPattern const& a, SparsityPattern const& b) {
      return a.d_ == b.d_ && a.edges_ == b.edges_;
    }

  private:
    int d_ = 0;
    std::vector<IndexSet> adj_;
    std::vector<std::vector<std::size_t>> adj_edge_;
    std::vector<Edge> edges_;
  };

  // Symmetric d x d matrix stored as packed upper triangle.
  class DenseSymMatrix {
  public:
    DenseSymMatrix() = default;
    explicit DenseSymMatrix(int d, double fill = 0.0)
      : d_(d), values_(static_cast<std::size_t>(d) * (d + 1) / 2, fill) {}

    static DenseSymMatrix identity(int d) {
      DenseSymMatrix m(d);
      for (int i = 1; i <= d; ++i) { m.set(i, i, 1.0); }
      return m;
    }

    // Reads the symmetric part of a square block (upper triangle wins).
    static DenseSymMatrix from_block(DenseBlock const& b) {
      if (b.rows() != b.cols()) { throw DimensionMismatch("DenseSymMatrix: block not square"); }
      DenseSymMatrix m(static_cast<int>(b.rows()));
      for (int i = 1; i <= m.d_; ++i) {
        for (int j = i; j <= m.d_; ++j) { m.set(i, j, b(i - 1, j - 1)); }
      }
      return m;
    }

    int dim() const { return d_; }

    double at(int i, int j) const { return values_[index(i, j)]; }
    void set(int i, int j, double v) { values_[index(i, j)] = v; }

    DenseBlock to_block() const {
      DenseBlock b(d_, d_);
      for (int i = 1; i <= d_; ++i) {
        for (int j = i; j <= d_; ++j) {
          b(i - 1, j - 1) = at(i, j);
          b(j - 1, i - 1) = at(i, j);
        }
      }
      return b;
    }

    friend bool operator==(DenseSymMatrix const&, DenseSymMatrix const&) = default;

  private:
    std::size_t index(int i, int j) const {
      if (i < 1 || j < 1 || i > d_ || j > d_) {
        throw std::out_of_range("DenseSymMatrix: index out of range");
      }
      if (i > j) { std::swap(i, j); }
      auto const r = static_cast<std::size_t>(i - 1);
      auto const c = static_cast<std::size_t>(j - 1);
      return r * static_cast<std::size_t>(d_) - r * (r - 1) / 2 + (c - r);
    }

    int d_ = 0;
    std::vector<double> values_;
  };

  // (i, j, value) with i != j; used to build sparse matrices.
  struct Entry {
    int i;
    int j;
    double value;
  };

  // Symmetric sparse matrix: dense diagonal plus one value per pattern edge.
  class SymSparseMatrix {
  public:
    SymSparseMatrix() = default;

    // Diagonal-only matrix.
    explicit SymSparseMatrix(std::vector<double> diag)
      : pattern_(static_cast<int>(diag.size())), diag_(std::move(diag)) {}

    // Off-diagonal entries with exact zero value are dropped. An unordered
    // pair may appear only once.
    SymSparseMatrix(std::vector<double> diag, std::vector<Entry> const& entries)
      : diag_(std::move(diag)) {
      int const d = static_cast<int>(diag_.size());
      std::vector<Edge> edges;
      edges.reserve(entries.size());
      for (auto const& e : entries) {
        if (e.i == e.j) { throw std::invalid_argument("SymSparseMatrix: diagonal passed as entry"); }
        if (e.value != 0.0) { edges.push_back({std::min(e.i, e.j), std::max(e.i, e.j)}); }
      }
      pattern_ = SparsityPattern(d, edges);
      if (pattern_.num_edges() != edges.size()) {
        throw std::invalid_argument("SymSparseMatrix: duplicate entry");
      }
      offdiag_.assign(pattern_.num_edges(), 0.0);
      for (auto const& e : entries) {
        if (e.value != 0.0) { offdiag_[*pattern_.edge_id(e.i, e.j)] = e.value; }
      }
    }

    // Values aligned with pattern.edges(). Zero values are dropped.
    SymSparseMatrix(SparsityPattern const& pattern, std::vector<double> diag,
                    std::vector<double> const& edge_values) {
      if (static_cast<int>(diag.size()) != pattern.dim() ||
          edge_values.size() != pattern.num_edges()) {
        throw DimensionMismatch("SymSparseMatrix: value count does not match pattern");
      }
      std::vector<Entry> entries;
      entries.reserve(edge_values.size());
      for (std::size_t id = 0; id < edge_values.size(); ++id) {
        auto const& e = pattern.edges()[id];
        entries.push_back({e.i, e.j, edge_values[id]});
      }
      *this = SymSparseMatrix(std::move(diag), entries);
    }

    static SymSparseMatrix identity(int d) {
      return SymSparseMatrix(std::vector<double>(static_cast<std::size_t>(d), 1.0));
    }

    int dim() const { return pattern_.dim(); }
    SparsityPattern const& pattern() const { return pattern_; }
    std::vector<double> const& diagonal() const { return diag_; }
    std::vector<double> const& edge_values() const { return offdiag_; }

    double at(int i, int j) const {
      if (i < 1 || j < 1 || i > dim() || j > dim()) {
        throw std::out_of_range("SymSparseMatrix: index out of range");
      }
      if (i == j) { return diag_[i - 1]; }
      auto id = pattern_.edge_id(i, j);
      return id ? offdiag_[*id] : 0.0;
    }

    // Largest off-diagonal magnitude.
    double max_offdiag_abs() const {
      double m = 0.0;
      for (double v : offdiag_) { m = std::max(m, std::abs(v)); }
      return m;
    }

    std::vector<Entry> entries() const {
      std::vector<Entry> out;
      out.reserve(offdiag_.size());
      for (std::size_t id = 0; id < offdiag_.size(); ++id) {
        out.push_back({pattern_.edges()[id].i, pattern_.edges()[id].j, offdiag_[id]});
      }
      return out;
    }

    friend bool operator==(SymSparseMatrix const& a, SymSparseMatrix const& b) {
      return a.pattern_ == b.pattern_ && a.diag_ == b.diag_ && a.offdiag_ == b.offdiag_;
    }

  private:
    SparsityPattern pattern_;
    std::vector<double> diag_;
    std::vector<double> offdiag_;
  };

  // ---------------------------------------------------------------------
  // Conversions and projections

  inline DenseSymMatrix to_dense(SymSparseMatrix const& m) {
    DenseSymMatrix out(m.dim());
    for (int i = 1; i <= m.dim(); ++i) { out.set(i, i, m.diagonal()[i - 1]); }
    for (auto const& e : m.entries()) { out.set(e.i, e.j, e.value); }
    return out;
  }

  // Projection onto pattern e: the diagonal is kept, off-diagonals are
  // kept iff (i,j) is an edge of e (and nonzero).
  inline SymSparseMatrix project(DenseSymMatrix const& m, SparsityPattern const& e) {
    if (m.dim() != e.dim()) { throw DimensionMismatch("project: dimension mismatch"); }
    std::vector<double> diag(static_cast<std::size_t>(m.dim()));
    for (int i = 1; i <= m.dim(); ++i) { diag[i - 1] = m.at(i, i); }
    std::vector<Entry> entries;
    entries.reserve(e.num_edges());
    for (auto const& ed : e.edges()) { entries.push_back({ed.i, ed.j, m.at(ed.i, ed.j)}); }
    return SymSparseMatrix(std::move(diag), entries);
  }

  // Sparse view of all nonzeros of a dense matrix.
  inline SymSparseMatrix to_sparse(DenseSymMatrix const& m) {
    std::vector<double> diag(static_cast<std::size_t>(m.dim()));
    std::vector<Entry> entries;
    for (int i = 1; i <= m.dim(); ++i) {
      diag[i - 1] = m.at(i, i);
      for (int j = i + 1; j <= m.dim(); ++j) {
        if (m.at(i, j) != 0.0) { entries.push_back({i, j, m.at(i, j)}); }
      }
    }
    return SymSparseMatrix(std::move(diag), entries);
  }

  inline SparsityPattern permute(SparsityPattern const& e, Permutation const& q) {
    if (q.size() != e.dim()) { throw DimensionMismatch("permute: size mismatch"); }
    std::vector<Edge> edges;
    edges.reserve(e.num_edges());
    for (auto const& ed : e.edges()) { edges.push_back({q(ed.i), q(ed.j)}); }
    return SparsityPattern(e.dim(), std::move(edges));
  }

  // Output entry (q(a), q(b)) equals input entry (a, b).
  inline SymSparseMatrix permute(SymSparseMatrix const& m, Permutation const& q) {
    if (q.size() != m.dim()) { throw DimensionMismatch("permute: size mismatch"); }
    std::vector<double> diag(m.diagonal().size());
    for (int v = 1; v <= m.dim(); ++v) { diag[q(v) - 1] = m.diagonal()[v - 1]; }
    std::vector<Entry> entries = m.entries();
    for (auto& e : entries) {
      e.i = q(e.i);
      e.j = q(e.j);
    }
    return SymSparseMatrix(std::move(diag), entries);
  }

  inline DenseSymMatrix permute(DenseSymMatrix const& m, Permutation const& q) {
    if (q.size() != m.dim()) { throw DimensionMismatch("permute: size mismatch"); }
    DenseSymMatrix out(m.dim());
    for (int a = 1; a <= m.dim(); ++a) {
      for (int b = a; b <= m.dim(); ++b) { out.set(q(a), q(b), m.at(a, b)); }
    }
    return out;
  }

  namespace detail {
    inline void check_range(IndexSet const& s, int d, char const* what) {
      if (!s.empty() && s.back() > d) {
        throw std::out_of_range(std::string(what) + ": index out of range");
      }
    }
  } // namespace detail

  // Block with b(a, c) = M(rows[a], cols[c]); absent sparse entries read 0.
  inline DenseBlock
  submatrix(SymSparseMatrix const& m, IndexSet const& rows, IndexSet const& cols) {
    detail::check_range(rows, m.dim(), "submatrix");
    detail::check_range(cols, m.dim(), "submatrix");
    DenseBlock b(rows.size(), cols.size());
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t c = 0; c < cols.size(); ++c) { b(a, c) = m.at(rows[a], cols[c]); }
    }
    return b;
  }

  inline DenseBlock
  submatrix(DenseSymMatrix const& m, IndexSet const& rows, IndexSet const& cols) {
    detail::check_range(rows, m.dim(), "submatrix");
    detail::check_range(cols, m.dim(), "submatrix");
    DenseBlock b(rows.size(), cols.size());
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t c = 0; c < cols.size(); ++c) { b(a, c) = m.at(rows[a], cols[c]); }
    }
    return b;
  }

  // Principal submatrix on `members`, relabeled 1..|members| by rank.
  inline SymSparseMatrix
  principal_submatrix(SymSparseMatrix const& m, IndexSet const& members) {
    detail::check_range(members, m.dim(), "principal_submatrix");
    std::vector<double> diag;
    diag.reserve(members.size());
    std::vector<Entry> entries;
    for (std::size_t a = 0; a < members.size(); ++a) {
      int const v = members[a];
      diag.push_back(m.diagonal()[v - 1]);
      auto const& nb = m.pattern().neighbors(v);
      for (int u : nb) {
        if (u <= v) { continue; }
        if (auto pos = members.position(u)) {
          entries.push_back({static_cast<int>(a + 1), static_cast<int>(*pos + 1), m.at(v, u)});
        }
      }
    }
    return SymSparseMatrix(std::move(diag), entries);
  }

  inline SparsityPattern
  induced_pattern(SparsityPattern const& e, IndexSet const& members) {
    std::vector<Edge> edges;
    for (std::size_t a = 0; a < members.size(); ++a) {
      int const v = members[a];
      for (int u : e.higher_neighbors(v)) {
        if (auto pos = members.position(u)) {
          edges.push_back({static_cast<int>(a + 1), static_cast<int>(*pos + 1)});
        }
      }
    }
    return SparsityPattern(static_cast<int>(members.size()), std::move(edges));
  }

  // True iff Cholesky without pivoting succeeds with every pivot above
  // pivot_tol times the largest diagonal magnitude.
  inline bool is_positive_definite(DenseSymMatrix const& m, double pivot_tol = 1e-12) {
    DenseBlock b = m.to_block();
    for (double v : b.values()) {
      if (!std::isfinite(v)) { throw NonFinite("is_positive_definite: non-finite entry"); }
    }
    if (m.dim() == 0) { return true; }
    double const scale = dense::max_abs_diagonal(b);
    if (scale == 0.0) { return false; }
    return dense::cholesky_in_place(b, pivot_tol * scale);
  }

} // namespace cglasso
