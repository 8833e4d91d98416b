#include "nbattack/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "nbattack/error.hpp"

namespace nbattack {

namespace {

// Dense families grow quadratically; these keep adjacency storage bounded.
constexpr int kMaxHypercubeDim = 20;
constexpr int kMaxDenseNodes = 4096;
constexpr int kMaxSparseNodes = 1 << 24;

[[noreturn]] void reject(const std::string& what) { throw Error(ErrorCode::invalid_params, what); }

std::string list_nodes(const std::vector<int>& nodes) {
  std::ostringstream os;
  for (std::size_t i = 0; i < nodes.size() && i < 16; ++i) os << (i ? "," : "") << nodes[i];
  if (nodes.size() > 16) os << ",...";
  return os.str();
}

}  // namespace

std::string_view to_string(Family kind) noexcept {
  switch (kind) {
    case Family::circle: return "circle";
    case Family::circulant: return "circulant";
    case Family::hypercube: return "hypercube";
    case Family::complete: return "complete";
    case Family::complete_bipartite: return "complete_bipartite";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::circle, Family::circulant, Family::hypercube, Family::complete,
                   Family::complete_bipartite}) {
    if (to_string(f) == name) return f;
  }
  reject("unknown family kind '" + std::string(name) + "'");
}

int FamilySpec::size_param() const noexcept {
  switch (kind) {
    case Family::hypercube: return dim;
    case Family::complete_bipartite: return side;
    default: return n;
  }
}

FamilySpec FamilySpec::with_size(int value) const {
  FamilySpec out = *this;
  switch (kind) {
    case Family::hypercube: out.dim = value; break;
    case Family::complete_bipartite: out.side = value; break;
    default: out.n = value; break;
  }
  return out;
}

std::string FamilySpec::label() const {
  std::ostringstream os;
  os << to_string(kind);
  switch (kind) {
    case Family::hypercube: os << "(dim=" << dim << ")"; break;
    case Family::complete_bipartite: os << "(side=" << side << ")"; break;
    case Family::circulant: {
      os << "(n=" << n << ",offsets=";
      for (std::size_t i = 0; i < offsets.size(); ++i) os << (i ? ";" : "") << offsets[i];
      os << ")";
      break;
    }
    default: os << "(n=" << n << ")"; break;
  }
  return os.str();
}

int validate_regular(const std::vector<std::vector<int>>& adjacency) {
  const int n = static_cast<int>(adjacency.size());
  if (n == 0) reject("graph has no nodes");

  for (int v = 0; v < n; ++v) {
    std::vector<int> sorted = adjacency[v];
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const int u = sorted[i];
      if (u < 0 || u >= n) reject("node " + std::to_string(v) + " lists out-of-range neighbor");
      if (u == v) reject("self-loop at node " + std::to_string(v));
      if (i > 0 && sorted[i - 1] == u) {
        reject("duplicate edge " + std::to_string(v) + "-" + std::to_string(u));
      }
      const auto& back = adjacency[u];
      if (std::find(back.begin(), back.end(), v) == back.end()) {
        reject("adjacency not symmetric at edge " + std::to_string(v) + "-" + std::to_string(u));
      }
    }
  }

  const std::size_t r = adjacency[0].size();
  std::vector<int> offending;
  for (int v = 0; v < n; ++v) {
    if (adjacency[v].size() != r) offending.push_back(v);
  }
  if (!offending.empty()) {
    throw Error(ErrorCode::not_regular, "degree differs from node 0 (" + std::to_string(r) +
                                            ") at nodes " + list_nodes(offending));
  }

  std::vector<char> seen(n, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int u : adjacency[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        frontier.push(u);
      }
    }
  }
  if (reached != n) {
    throw Error(ErrorCode::disconnected, "only " + std::to_string(reached) + " of " +
                                             std::to_string(n) + " nodes reachable from node 0");
  }
  if (r == 0) reject("graph with a single node has no edges");
  return static_cast<int>(r);
}

Graph::Graph(int n, int r, std::vector<int> adjacency)
    : n_(n), r_(r), adjacency_(std::move(adjacency)) {
  closed_.resize(static_cast<std::size_t>(n_) * (r_ + 1));
  for (int v = 0; v < n_; ++v) {
    int* out = closed_.data() + static_cast<std::size_t>(v) * (r_ + 1);
    out[0] = v;
    std::copy_n(adjacency_.data() + static_cast<std::size_t>(v) * r_, r_, out + 1);
  }
}

Graph Graph::from_adjacency(std::vector<std::vector<int>> adjacency) {
  const int r = validate_regular(adjacency);
  const int n = static_cast<int>(adjacency.size());
  std::vector<int> flat;
  flat.reserve(static_cast<std::size_t>(n) * r);
  for (auto& row : adjacency) {
    std::sort(row.begin(), row.end());
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return Graph(n, r, std::move(flat));
}

Graph build_family(const FamilySpec& spec) {
  std::vector<std::vector<int>> adj;
  switch (spec.kind) {
    case Family::circle: {
      if (spec.n < 3) reject("circle requires n >= 3");
      if (spec.n > kMaxSparseNodes) reject("circle above " + std::to_string(kMaxSparseNodes) + " nodes");
      const int n = spec.n;
      adj.resize(n);
      for (int v = 0; v < n; ++v) adj[v] = {(v + n - 1) % n, (v + 1) % n};
      break;
    }
    case Family::circulant: {
      const int n = spec.n;
      if (n < 3) reject("circulant requires n >= 3");
      if (spec.offsets.empty()) reject("circulant requires a nonempty offset set");
      std::set<int> offsets(spec.offsets.begin(), spec.offsets.end());
      if (offsets.size() != spec.offsets.size()) reject("circulant offsets must be distinct");
      int g = n;
      for (int s : offsets) {
        if (s < 1 || s > n / 2) {
          reject("circulant offset " + std::to_string(s) + " outside 1.." + std::to_string(n / 2));
        }
        g = std::gcd(g, s);
      }
      if (g != 1) {
        reject("connectivity violated: circulant offsets share gcd " + std::to_string(g) +
               " with n, giving " + std::to_string(g) + " components");
      }
      if (n > kMaxSparseNodes) reject("circulant above " + std::to_string(kMaxSparseNodes) + " nodes");
      adj.resize(n);
      for (int v = 0; v < n; ++v) {
        for (int s : offsets) {
          adj[v].push_back((v + s) % n);
          if (2 * s != n) adj[v].push_back((v - s + n) % n);
        }
      }
      break;
    }
    case Family::hypercube: {
      if (spec.dim < 1) reject("hypercube requires dim >= 1");
      if (spec.dim > kMaxHypercubeDim) reject("hypercube dim above " + std::to_string(kMaxHypercubeDim));
      const int n = 1 << spec.dim;
      adj.resize(n);
      for (int v = 0; v < n; ++v) {
        for (int b = 0; b < spec.dim; ++b) adj[v].push_back(v ^ (1 << b));
      }
      break;
    }
    case Family::complete: {
      if (spec.n < 2) reject("complete graph requires n >= 2");
      if (spec.n > kMaxDenseNodes) reject("complete graph above " + std::to_string(kMaxDenseNodes) + " nodes");
      adj.resize(spec.n);
      for (int v = 0; v < spec.n; ++v) {
        for (int u = 0; u < spec.n; ++u) {
          if (u != v) adj[v].push_back(u);
        }
      }
      break;
    }
    case Family::complete_bipartite: {
      const int m = spec.side;
      if (m < 1) reject("complete_bipartite requires side >= 1");
      if (2 * m > kMaxDenseNodes) reject("complete_bipartite above " + std::to_string(kMaxDenseNodes) + " nodes");
      adj.resize(2 * m);
      for (int v = 0; v < 2 * m; ++v) {
        const int other = v < m ? m : 0;
        for (int u = other; u < other + m; ++u) adj[v].push_back(u);
      }
      break;
    }
  }
  return Graph::from_adjacency(std::move(adj));
}

NeighborhoodIndex build_neighborhood_index(const Graph& g) {
  const int n = g.size();
  NeighborhoodIndex index;
  index.closed_neighborhoods.reserve(n);
  index.r_star_per_node.assign(n, 0);

  // Depth-2 breadth-first search from every node; `mark[v] == source` means v
  // is already known to lie within distance 2 of `source`.
  std::vector<int> mark(n, -1);
  std::vector<int> partners;
  for (int source = 0; source < n; ++source) {
    auto closed = g.closed_neighborhood(source);
    index.closed_neighborhoods.emplace_back(closed.begin(), closed.end());

    partners.clear();
    mark[source] = source;
    for (int u : g.neighbors(source)) {
      if (mark[u] != source) {
        mark[u] = source;
        partners.push_back(u);
      }
    }
    const std::size_t first_ring = partners.size();
    for (std::size_t k = 0; k < first_ring; ++k) {
      for (int w : g.neighbors(partners[k])) {
        if (mark[w] != source) {
          mark[w] = source;
          partners.push_back(w);
        }
      }
    }
    index.r_star_per_node[source] = static_cast<int>(partners.size());
    for (int j : partners) {
      if (source < j) index.near_pairs.emplace_back(source, j);
    }
  }

  const auto [lo, hi] = std::minmax_element(index.r_star_per_node.begin(), index.r_star_per_node.end());
  if (*lo == *hi) index.r_star = *lo;
  return index;
}

}  // namespace nbattack
