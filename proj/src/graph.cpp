#include "dcadmm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>

namespace dcadmm {

namespace {

// BFS distances along edge direction: dist[t] = shortest path length from
// `source` to t, following sender -> receiver hops.
std::vector<int> bfs_from(const DirectedGraph& g, int source) {
  std::vector<int> dist(g.n(), -1);
  std::queue<int> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : g.out_neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

bool strongly_connected(int n, const std::vector<std::vector<int>>& out,
                        const std::vector<std::vector<int>>& in) {
  auto reaches_all = [n](const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    seen[0] = 1;
    q.push(0);
    int count = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          ++count;
          q.push(v);
        }
      }
    }
    return count == n;
  };
  return reaches_all(out) && reaches_all(in);
}

}  // namespace

DirectedGraph::DirectedGraph(int n, std::vector<std::pair<int, int>> edges)
    : n_(n), edges_(std::move(edges)) {
  if (n_ < 2) throw std::invalid_argument("DirectedGraph: need at least 2 nodes");
  in_.resize(n_);
  out_.resize(n_);
  std::set<std::pair<int, int>> seen;
  for (auto [i, j] : edges_) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
      throw std::invalid_argument("DirectedGraph: node index out of range");
    if (i == j) throw std::invalid_argument("DirectedGraph: self-loops are not stored as edges");
    if (!seen.insert({i, j}).second)
      throw std::invalid_argument("DirectedGraph: duplicate edge");
    in_[i].push_back(j);
    out_[j].push_back(i);
  }
  for (auto& v : in_) std::sort(v.begin(), v.end());
  for (auto& v : out_) std::sort(v.begin(), v.end());
  std::sort(edges_.begin(), edges_.end());
  if (!strongly_connected(n_, out_, in_))
    throw std::invalid_argument("DirectedGraph: graph is not strongly connected");
  exact_diameter_ = dcadmm::exact_diameter(*this);
  diameter_bound_ = exact_diameter_;
}

void DirectedGraph::set_diameter_bound(int d) {
  if (d < exact_diameter_)
    throw std::invalid_argument("diameter_bound below the exact diameter");
  diameter_bound_ = d;
}

int exact_diameter(const DirectedGraph& g) {
  int diam = 0;
  for (int s = 0; s < g.n(); ++s) {
    auto dist = bfs_from(g, s);
    for (int d : dist) {
      if (d < 0) throw std::runtime_error("exact_diameter: unreachable pair");
      diam = std::max(diam, d);
    }
  }
  return diam;
}

DirectedGraph ring_digraph(int n) {
  if (n < 2) throw std::invalid_argument("ring_digraph: n must be >= 2");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(n);
  for (int j = 0; j < n; ++j) edges.emplace_back((j + 1) % n, j);  // j -> j+1
  return DirectedGraph(n, std::move(edges));
}

DirectedGraph erdos_renyi_digraph(int n, double p, std::uint64_t seed, int resample_budget) {
  if (n < 2) throw std::invalid_argument("erdos_renyi_digraph: n must be >= 2");
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument("erdos_renyi_digraph: p must be in (0, 1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int attempt = 0; attempt < resample_budget; ++attempt) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        if (coin(rng) < p) edges.emplace_back(i, j);
      }
    try {
      return DirectedGraph(n, std::move(edges));
    } catch (const std::invalid_argument&) {
      // not strongly connected; redraw
    }
  }
  throw std::runtime_error("erdos_renyi_digraph: connectivity unattainable within resample budget");
}

DirectedGraph symmetrize(const DirectedGraph& g) {
  std::set<std::pair<int, int>> edges;
  for (auto [i, j] : g.edges()) {
    edges.insert({i, j});
    edges.insert({j, i});
  }
  return DirectedGraph(g.n(), {edges.begin(), edges.end()});
}

WeightMatrix::WeightMatrix(const DirectedGraph& g, Matrix entries)
    : graph_(&g), n_(g.n()), entries_(std::move(entries)) {
  if (entries_.rows != static_cast<std::size_t>(n_) ||
      entries_.cols != static_cast<std::size_t>(n_))
    throw std::invalid_argument("WeightMatrix: entries shape mismatch");
  std::set<std::pair<int, int>> edge_set(g.edges().begin(), g.edges().end());
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const double v = entries_(i, j);
      if (v < 0.0) throw std::invalid_argument("WeightMatrix: negative entry");
      if (v > 0.0 && i != j && !edge_set.count({i, j}))
        throw std::invalid_argument("WeightMatrix: positive entry off the graph support");
    }
  }
  in_weights_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    std::vector<int> senders = g.in_neighbors(i);
    senders.push_back(i);
    std::sort(senders.begin(), senders.end());
    for (int j : senders) in_weights_[i].emplace_back(j, entries_(i, j));
  }
  build_from_in_weights();
}

WeightMatrix::WeightMatrix(const DirectedGraph& g, const SparseColumns& columns)
    : graph_(&g), n_(g.n()) {
  if (columns.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("WeightMatrix: one column per node required");
  std::set<std::pair<int, int>> edge_set(g.edges().begin(), g.edges().end());
  // One slot per in-neighbor plus self, mirroring the mailbox layout even
  // where a provided weight is zero.
  in_weights_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    std::vector<int> senders = g.in_neighbors(i);
    senders.push_back(i);
    std::sort(senders.begin(), senders.end());
    for (int j : senders) in_weights_[i].emplace_back(j, 0.0);
  }
  for (int j = 0; j < n_; ++j) {
    for (auto [i, v] : columns[j]) {
      if (i < 0 || i >= n_) throw std::invalid_argument("WeightMatrix: row index out of range");
      if (v < 0.0) throw std::invalid_argument("WeightMatrix: negative entry");
      if (v > 0.0 && i != j && !edge_set.count({i, j}))
        throw std::invalid_argument("WeightMatrix: positive entry off the graph support");
      auto& row = in_weights_[i];
      auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(j, 0.0));
      if (it == row.end() || it->first != j) {
        if (v != 0.0)
          throw std::invalid_argument("WeightMatrix: entry off the graph support");
      } else {
        it->second = v;
      }
    }
  }
  if (n_ <= kDenseLimit) {
    entries_ = Matrix(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (auto [j, v] : in_weights_[i]) entries_(i, j) = v;
  }
  build_from_in_weights();
}

void WeightMatrix::build_from_in_weights() {
  for (int i = 0; i < n_; ++i) {
    const double diag = (*this)(i, i);
    if (diag <= 0.0)
      throw std::invalid_argument("WeightMatrix: diagonal entries must be positive");
  }
  if (!is_column_stochastic())
    throw std::invalid_argument("WeightMatrix: columns must sum to 1");
}

double WeightMatrix::operator()(int i, int j) const {
  if (has_dense()) return entries_(i, j);
  const auto& row = in_weights_[i];
  auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(j, 0.0));
  return it != row.end() && it->first == j ? it->second : 0.0;
}

const Matrix& WeightMatrix::entries() const {
  if (!has_dense())
    throw std::logic_error("WeightMatrix: dense entries not kept above the size limit");
  return entries_;
}

bool WeightMatrix::is_column_stochastic(double tol) const {
  std::vector<double> col_sums(n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (auto [j, v] : in_weights_[i]) col_sums[j] += v;
  for (double s : col_sums)
    if (std::abs(s - 1.0) > tol) return false;
  return true;
}

bool WeightMatrix::is_primitive() const {
  // Boolean reachability powers of the support pattern. Wielandt: a primitive
  // n x n matrix has a fully positive power no later than (n-1)^2 + 1.
  std::vector<std::vector<char>> reach(n_, std::vector<char>(n_, 0));
  for (int i = 0; i < n_; ++i)
    for (auto [j, v] : in_weights_[i]) reach[i][j] = v > 0.0;
  const long bound = static_cast<long>(n_ - 1) * (n_ - 1) + 1;
  auto all_positive = [&] {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (!reach[i][j]) return false;
    return true;
  };
  for (long step = 1; step <= bound; ++step) {
    if (all_positive()) return true;
    std::vector<std::vector<char>> next(n_, std::vector<char>(n_, 0));
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < n_; ++k)
        if (reach[i][k])
          for (auto [j, v] : in_weights_[k])
            if (v > 0.0) next[i][j] = 1;
    reach = std::move(next);
  }
  return all_positive();
}

WeightMatrix equal_neighbor_weights(const DirectedGraph& g) {
  const int n = g.n();
  if (n <= WeightMatrix::kDenseLimit) {
    Matrix entries(n, n);
    for (int j = 0; j < n; ++j) {
      const double w = 1.0 / (1.0 + g.out_degree(j));
      entries(j, j) = w;
      for (int i : g.out_neighbors(j)) entries(i, j) = w;
    }
    return WeightMatrix(g, std::move(entries));
  }
  WeightMatrix::SparseColumns cols(n);
  for (int j = 0; j < n; ++j) {
    const double w = 1.0 / (1.0 + g.out_degree(j));
    cols[j].emplace_back(j, w);
    for (int i : g.out_neighbors(j)) cols[j].emplace_back(i, w);
  }
  return WeightMatrix(g, cols);
}

WeightMatrix metropolis_weights(const DirectedGraph& g) {
  const int n = g.n();
  for (int i = 0; i < n; ++i)
    if (g.in_neighbors(i) != g.out_neighbors(i))
      throw std::invalid_argument("metropolis_weights: graph must be symmetric");
  Matrix entries(n, n);
  for (int i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (int j : g.in_neighbors(i)) {
      const double w = 1.0 / (1.0 + std::max(g.in_degree(i), g.in_degree(j)));
      entries(i, j) = w;
      row_sum += w;
    }
    entries(i, i) = 1.0 - row_sum;
  }
  return WeightMatrix(g, std::move(entries));
}

Matrix equal_in_neighbor_row_stochastic(const DirectedGraph& g) {
  const int n = g.n();
  Matrix entries(n, n);
  for (int i = 0; i < n; ++i) {
    const double w = 1.0 / (1.0 + g.in_degree(i));
    entries(i, i) = w;
    for (int j : g.in_neighbors(i)) entries(i, j) = w;
  }
  return entries;
}

void write_edge_list(const DirectedGraph& g, std::ostream& os) {
  os << g.n() << ' ' << g.edge_count() << '\n';
  for (auto [i, j] : g.edges()) os << j << ' ' << i << '\n';  // src dst
}

DirectedGraph read_edge_list(std::istream& is) {
  int n = 0, m = 0;
  if (!(is >> n >> m)) throw std::runtime_error("read_edge_list: malformed header");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(m);
  for (int e = 0; e < m; ++e) {
    int src = 0, dst = 0;
    if (!(is >> src >> dst)) throw std::runtime_error("read_edge_list: truncated edge list");
    edges.emplace_back(dst, src);
  }
  return DirectedGraph(n, std::move(edges));
}

void write_weights_csv(const WeightMatrix& w, std::ostream& os) {
  char buf[32];
  for (int i = 0; i < w.n(); ++i) {
    for (int j = 0; j < w.n(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", w(i, j));
      os << buf << (j + 1 < w.n() ? ',' : '\n');
    }
  }
}

}  // namespace dcadmm
