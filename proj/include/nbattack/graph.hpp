#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nbattack {

enum class Family { circle, circulant, hypercube, complete, complete_bipartite };

std::string_view to_string(Family kind) noexcept;
Family parse_family(std::string_view name);

/// Parameters for one member of a graph family. Only the fields relevant to
/// `kind` are read: `n` for circle/circulant/complete, `dim` for hypercube,
/// `side` for complete_bipartite, `offsets` for circulant.
struct FamilySpec {
  Family kind = Family::circle;
  int n = 0;
  int dim = 0;
  int side = 0;
  std::vector<int> offsets;

  static FamilySpec circle(int n) { return {Family::circle, n, 0, 0, {}}; }
  static FamilySpec circulant(int n, std::vector<int> offsets) {
    return {Family::circulant, n, 0, 0, std::move(offsets)};
  }
  static FamilySpec hypercube(int dim) { return {Family::hypercube, 0, dim, 0, {}}; }
  static FamilySpec complete(int n) { return {Family::complete, n, 0, 0, {}}; }
  static FamilySpec complete_bipartite(int side) {
    return {Family::complete_bipartite, 0, 0, side, {}};
  }

  /// The single size parameter of the family (n, dim or side).
  int size_param() const noexcept;
  FamilySpec with_size(int value) const;
  std::string label() const;
};

/// Immutable connected simple r-regular graph on nodes 0..N-1.
///
/// Adjacency and closed neighborhoods are stored flat (stride r and r+1), which
/// is what the chain's inner loop reads.
class Graph {
 public:
  /// Validates the adjacency lists (simple, symmetric, regular, connected) and
  /// sorts them. Throws `Error` naming the violated invariant.
  static Graph from_adjacency(std::vector<std::vector<int>> adjacency);

  int size() const noexcept { return n_; }
  int degree() const noexcept { return r_; }
  std::int64_t edge_count() const noexcept { return std::int64_t{n_} * r_ / 2; }

  std::span<const int> neighbors(int node) const noexcept {
    return {adjacency_.data() + static_cast<std::size_t>(node) * r_, static_cast<std::size_t>(r_)};
  }
  /// {node} together with its neighbors, node first.
  std::span<const int> closed_neighborhood(int node) const noexcept {
    return {closed_.data() + static_cast<std::size_t>(node) * (r_ + 1),
            static_cast<std::size_t>(r_ + 1)};
  }

 private:
  Graph(int n, int r, std::vector<int> adjacency);

  int n_ = 0;
  int r_ = 0;
  std::vector<int> adjacency_;
  std::vector<int> closed_;
};

/// Checks simplicity, symmetry, regularity and connectivity; returns the
/// common degree. Errors: invalid-params, not-regular, disconnected.
int validate_regular(const std::vector<std::vector<int>>& adjacency);

Graph build_family(const FamilySpec& spec);

/// Distance-one-or-two structure of a graph.
struct NeighborhoodIndex {
  std::vector<std::vector<int>> closed_neighborhoods;
  /// Unordered pairs (i < j) at shortest-path distance 1 or 2.
  std::vector<std::pair<int, int>> near_pairs;
  std::vector<int> r_star_per_node;
  /// Set only when every node has the same number of near partners.
  std::optional<int> r_star;
};

NeighborhoodIndex build_neighborhood_index(const Graph& g);

}  // namespace nbattack
