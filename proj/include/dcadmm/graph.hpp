#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dcadmm/linalg.hpp"

namespace dcadmm {

// Directed interconnection topology. An edge (i, j) means j -> i: agent j
// transmits, agent i receives, i.e. j is an in-neighbor of i. Nodes are
// 0-based. Instances are immutable after construction and safe to share
// across threads.
class DirectedGraph {
 public:
  // Throws std::invalid_argument on self-loops, duplicate edges, nodes out
  // of range, a graph that is not strongly connected, or n < 2.
  DirectedGraph(int n, std::vector<std::pair<int, int>> edges);

  int n() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<int>& in_neighbors(int i) const { return in_[i]; }
  const std::vector<int>& out_neighbors(int i) const { return out_[i]; }
  int in_degree(int i) const { return static_cast<int>(in_[i].size()); }
  int out_degree(int i) const { return static_cast<int>(out_[i].size()); }

  int diameter_bound() const { return diameter_bound_; }
  int exact_diameter() const { return exact_diameter_; }
  // The protocol only needs an upper bound; callers may loosen it.
  void set_diameter_bound(int d);

 private:
  int n_;
  std::vector<std::pair<int, int>> edges_;  // (receiver, sender)
  std::vector<std::vector<int>> in_, out_;
  int exact_diameter_;
  int diameter_bound_;
};

// Directed cycle 0 -> 1 -> ... -> n-1 -> 0; diameter n-1.
DirectedGraph ring_digraph(int n);

// Each ordered pair is an edge independently with probability p; the draw is
// repeated until the result is strongly connected. Throws std::runtime_error
// ("connectivity unattainable") once the resample budget is exhausted.
DirectedGraph erdos_renyi_digraph(int n, double p, std::uint64_t seed,
                                  int resample_budget = 1000);

// Undirected companion of g: whenever either direction exists, both do.
DirectedGraph symmetrize(const DirectedGraph& g);

int exact_diameter(const DirectedGraph& g);

// Column-stochastic mixing matrix aligned to a graph: p(i,j) > 0 only for
// j == i or edge (i,j); every column sums to 1; diagonal entries positive.
// A dense entries matrix is kept for n up to kDenseLimit; above that only
// the per-receiver weight lists are stored (the protocol reads those
// anyway) and entry lookups fall back to a search.
class WeightMatrix {
 public:
  static constexpr int kDenseLimit = 512;

  using SparseColumns = std::vector<std::vector<std::pair<int, double>>>;  // col j: (row i, p_ij)

  WeightMatrix(const DirectedGraph& g, Matrix entries);
  WeightMatrix(const DirectedGraph& g, const SparseColumns& columns);

  const DirectedGraph& graph() const { return *graph_; }
  int n() const { return n_; }
  bool has_dense() const { return entries_.rows > 0; }
  double operator()(int i, int j) const;
  const Matrix& entries() const;  // throws when the dense form is not kept

  // Per-receiver weights: (sender j, p_ij) pairs for j in N_i^- plus (i, p_ii),
  // ascending by sender. This is what the protocol iterates over.
  const std::vector<std::pair<int, double>>& in_weights(int i) const { return in_weights_[i]; }

  bool is_column_stochastic(double tol = 1e-12) const;
  // Some boolean power of the support pattern up to (n-1)^2 + 1 is entrywise
  // positive iff the matrix is primitive.
  bool is_primitive() const;

 private:
  void build_from_in_weights();

  const DirectedGraph* graph_;
  int n_;
  Matrix entries_;  // empty in sparse mode
  std::vector<std::vector<std::pair<int, double>>> in_weights_;
};

// Out-degree based equal neighbor rule: column j carries 1/(1+outdeg(j)) at
// the diagonal and at every out-neighbor of j.
WeightMatrix equal_neighbor_weights(const DirectedGraph& g);

// Metropolis rule on a symmetric graph: symmetric doubly stochastic with
// positive diagonal. Throws if g is not symmetric.
WeightMatrix metropolis_weights(const DirectedGraph& g);

// Row-stochastic equal in-neighbor rule: row i carries 1/(1+indeg(i)) at the
// diagonal and at every in-neighbor of i.
Matrix equal_in_neighbor_row_stochastic(const DirectedGraph& g);

// Edge-list text format: first line "n m", then one "src dst" line per edge.
void write_edge_list(const DirectedGraph& g, std::ostream& os);
DirectedGraph read_edge_list(std::istream& is);
void write_weights_csv(const WeightMatrix& w, std::ostream& os);

}  // namespace dcadmm
