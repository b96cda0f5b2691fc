#pragma once

//
// ... Standard header files
//
#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <utility>
#include <vector>

//
// ... cglasso header files
//
#include <cglasso/spmat.hpp>

namespace cglasso {

  // Elimination tree of a symmetric pattern (labels are positions in the
  // elimination order). colset(j) is the index set I_j of below-diagonal
  // nonzeros of column j of L, including fill; parent(j) = min I_j, or 0
  // for a root.
  class EliminationTree {
  public:
    EliminationTree() = default;

    explicit EliminationTree(std::vector<IndexSet> colsets)
      : colsets_(std::move(colsets)) {
      int const d = dim();
      parent_.assign(static_cast<std::size_t>(d), 0);
      children_.assign(static_cast<std::size_t>(d), {});
      for (int j = 1; j <= d; ++j) {
        auto const& s = colsets_[j - 1];
        if (!s.empty()) {
          if (s.front() <= j || s.back() > d) {
            throw std::invalid_argument("EliminationTree: I_j must lie in (j, d]");
          }
          parent_[j - 1] = s.front();
          children_[s.front() - 1].push_back(j);
        }
      }
    }

    int dim() const { return static_cast<int>(colsets_.size()); }
    int parent(int j) const { return parent_[j - 1]; }
    IndexSet const& colset(int j) const { return colsets_[j - 1]; }
    std::vector<int> const& children(int j) const { return children_[j - 1]; }

    std::size_t nnz() const {
      std::size_t n = 0;
      for (auto const& s : colsets_) { n += s.size(); }
      return n;
    }

    // Pattern of L + L^T.
    SparsityPattern fill_pattern() const {
      std::vector<Edge> edges;
      edges.reserve(nnz());
      for (int j = 1; j <= dim(); ++j) {
        for (int i : colsets_[j - 1]) { edges.push_back({j, i}); }
      }
      return SparsityPattern(dim(), std::move(edges));
    }

    // (I_j \ {p(j)}) is contained in I_{p(j)} for every non-root j.
    bool has_nesting_property() const {
      for (int j = 1; j <= dim(); ++j) {
        int const p = parent(j);
        if (p == 0) { continue; }
        auto const& pj = colsets_[p - 1];
        for (int i : colsets_[j - 1]) {
          if (i != p && !pj.contains(i)) { return false; }
        }
      }
      return true;
    }

  private:
    std::vector<IndexSet> colsets_;
    std::vector<int> parent_;
    std::vector<std::vector<int>> children_;
  };

  struct ChordalAnalysis {
    bool is_chordal = false;
    std::optional<Permutation> peo;
    // Vertices of an induced cycle of length >= 4, in cycle order.
    std::vector<int> witness;
  };

  struct CompletionResult {
    SparsityPattern completed;
    Permutation ordering;
    std::vector<Edge> fill_edges;
  };

  // Maximum cardinality search. Vertices are numbered from position d
  // down to 1; each step takes the unnumbered vertex with the most
  // numbered neighbors, ties going to the largest label. The returned
  // permutation maps a vertex to its position, and is a perfect
  // elimination ordering whenever e is chordal.
  inline Permutation mcs_order(SparsityPattern const& e) {
    int const d = e.dim();
    std::vector<int> weight(static_cast<std::size_t>(d), 0);
    std::vector<int> position(static_cast<std::size_t>(d), 0);
    std::set<std::pair<int, int>> queue;
    for (int v = 1; v <= d; ++v) { queue.emplace(0, v); }
    for (int pos = d; pos >= 1; --pos) {
      auto it = std::prev(queue.end());
      int const v = it->second;
      queue.erase(it);
      position[v - 1] = pos;
      for (int u : e.neighbors(v)) {
        if (position[u - 1] != 0) { continue; }
        queue.erase({weight[u - 1], u});
        ++weight[u - 1];
        queue.emplace(weight[u - 1], u);
      }
    }
    return Permutation(std::move(position));
  }

  namespace detail {

    // Shortest path from `from` to `to` avoiding the closed neighborhood
    // of `center` (except the endpoints). Empty if none exists.
    inline std::vector<int>
    path_avoiding(SparsityPattern const& e, int center, int from, int to) {
      int const d = e.dim();
      std::vector<char> blocked(static_cast<std::size_t>(d), 0);
      blocked[center - 1] = 1;
      for (int u : e.neighbors(center)) { blocked[u - 1] = 1; }
      blocked[from - 1] = 0;
      blocked[to - 1] = 0;

      std::vector<int> prev(static_cast<std::size_t>(d), 0);
      std::deque<int> bfs{from};
      prev[from - 1] = from;
      while (!bfs.empty()) {
        int const v = bfs.front();
        bfs.pop_front();
        if (v == to) { break; }
        for (int u : e.neighbors(v)) {
          if (blocked[u - 1] || prev[u - 1] != 0) { continue; }
          prev[u - 1] = v;
          bfs.push_back(u);
        }
      }
      if (prev[to - 1] == 0) { return {}; }
      std::vector<int> path;
      for (int v = to; v != from; v = prev[v - 1]) { path.push_back(v); }
      path.push_back(from);
      std::ranges::reverse(path);
      return path;
    }

    // Chordless cycle through center, u, w (u, w non-adjacent neighbors
    // of center), or empty.
    inline std::vector<int>
    cycle_through(SparsityPattern const& e, int center, int u, int w) {
      auto path = path_avoiding(e, center, u, w);
      if (path.empty()) { return {}; }
      std::vector<int> cycle{center};
      cycle.insert(cycle.end(), path.begin(), path.end());
      return cycle;
    }

    inline std::vector<int> find_chordless_cycle(SparsityPattern const& e) {
      for (int v = 1; v <= e.dim(); ++v) {
        auto const& nb = e.neighbors(v);
        for (std::size_t a = 0; a < nb.size(); ++a) {
          for (std::size_t b = a + 1; b < nb.size(); ++b) {
            if (e.has_edge(nb[a], nb[b])) { continue; }
            auto c = cycle_through(e, v, nb[a], nb[b]);
            if (!c.empty()) { return c; }
          }
        }
      }
      return {};
    }

  } // namespace detail

  // Chordality test: run MCS and verify the ordering is a perfect
  // elimination ordering. On failure, a vertex whose higher neighbors do
  // not form a clique yields an induced cycle of length >= 4.
  inline ChordalAnalysis is_chordal(SparsityPattern const& e) {
    auto q = mcs_order(e);
    for (int pos = 1; pos <= e.dim(); ++pos) {
      int const v = q.inverse(pos);
      // Higher neighbors in elimination order; f is the earliest.
      int f = 0;
      for (int u : e.neighbors(v)) {
        if (q(u) > pos && (f == 0 || q(u) < q(f))) { f = u; }
      }
      if (f == 0) { continue; }
      for (int u : e.neighbors(v)) {
        if (u == f || q(u) < pos || e.has_edge(u, f)) { continue; }
        ChordalAnalysis result;
        result.witness = detail::cycle_through(e, v, f, u);
        if (result.witness.empty()) { result.witness = detail::find_chordless_cycle(e); }
        return result;
      }
    }
    ChordalAnalysis result;
    result.is_chordal = true;
    result.peo = std::move(q);
    return result;
  }

  // Symbolic Cholesky factorization of the pattern permuted by q: I_j is
  // the union of the higher neighbors of j and of I_c \ {j} over the
  // children c of j.
  inline EliminationTree symbolic_factor(SparsityPattern const& e, Permutation const& q) {
    auto const ep = permute(e, q);
    int const d = ep.dim();
    std::vector<IndexSet> colsets(static_cast<std::size_t>(d));
    std::vector<std::vector<int>> children(static_cast<std::size_t>(d));
    std::vector<int> merged;
    for (int j = 1; j <= d; ++j) {
      auto higher = ep.higher_neighbors(j);
      merged.assign(higher.begin(), higher.end());
      for (int c : children[j - 1]) {
        for (int i : colsets[c - 1]) {
          if (i != j) { merged.push_back(i); }
        }
      }
      colsets[j - 1] = IndexSet(merged);
      if (!colsets[j - 1].empty()) { children[colsets[j - 1].front() - 1].push_back(j); }
    }
    return EliminationTree(std::move(colsets));
  }

  // Elimination tree of a pattern whose natural order must already be a
  // perfect elimination ordering. Throws NotNoFill otherwise.
  inline EliminationTree no_fill_tree(SparsityPattern const& e) {
    auto t = symbolic_factor(e, Permutation::identity(e.dim()));
    if (t.nnz() != e.num_edges()) {
      throw NotNoFill("pattern does not factor without fill in its natural order");
    }
    return t;
  }

  // Chordal embedding: the input plus the symbolic fill under mcs_order.
  inline CompletionResult chordal_completion(SparsityPattern const& e) {
    auto q = mcs_order(e);
    auto t = symbolic_factor(e, q);
    auto filled = permute(t.fill_pattern(), q.inverse());
    std::vector<Edge> fill;
    for (auto const& ed : filled.edges()) {
      if (!e.has_edge(ed.i, ed.j)) { fill.push_back(ed); }
    }
    return {std::move(filled), std::move(q), std::move(fill)};
  }

  // Largest clique size minus one of a no-fill pattern: max_j |I_j|.
  inline int treewidth(EliminationTree const& t) {
    std::size_t w = 0;
    for (int j = 1; j <= t.dim(); ++j) { w = std::max(w, t.colset(j).size()); }
    return static_cast<int>(w);
  }

} // namespace cglasso
