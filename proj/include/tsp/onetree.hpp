#pragma once

#include "tsp/tsplib.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace tsp {

/// Penalties are kept in fixed-point units of 1/kPiScale so that every
/// comparison downstream (MST keys, alpha ordering, gains) is integer
/// arithmetic with one deterministic answer.
inline constexpr std::int64_t kPiScale = 1000;

/// Per-city penalties pi plus the Held-Karp lower bound w(pi) they
/// achieve. pi values are scaled by kPiScale.
struct Penalties {
  std::vector<std::int64_t> pi;
  std::int64_t w_scaled = 0;

  double w() const { return static_cast<double>(w_scaled) / kPiScale; }
  static Penalties zeros(int n) { return Penalties{std::vector<std::int64_t>(n, 0), 0}; }
};

/// Penalized edge cost d(i,j) + pi_i + pi_j in scaled units.
inline std::int64_t penalized_cost_scaled(const Instance& inst,
                                          const std::vector<std::int64_t>& pi,
                                          int i, int j) {
  return inst.dist(i, j) * kPiScale + pi[i] + pi[j];
}

/// Same quantity in length units.
double penalized_cost(const Instance& inst, const Penalties& p, int i, int j);

/// Minimum 1-tree: a spanning tree over V \ {special} plus the two
/// cheapest penalized edges at the special node. parent holds MST links
/// over V \ {special} (root and special are -1).
struct OneTree {
  int special = -1;
  std::array<int, 2> special_edges{-1, -1};
  std::vector<int> parent;
  std::vector<int> degree;
  std::int64_t total_scaled = 0;

  double total_length() const { return static_cast<double>(total_scaled) / kPiScale; }
  bool is_tree_edge(int i, int j) const;
};

/// Builds the minimum 1-tree under penalties p. The special node is the
/// MST leaf whose second nearest neighbor (by penalized cost) is
/// farthest away, which gives the tightest bound among leaves.
OneTree minimum_one_tree(const Instance& inst, const Penalties& p);

/// alpha(i,j): how much the minimum 1-tree grows when edge (i,j) is
/// forced into it. Zero for tree edges.
struct AlphaEntry {
  int j;
  std::int64_t alpha_scaled;
};

struct AlphaTable {
  /// Per city, the `neighborhood` nearest cities by penalized cost,
  /// ascending, each with its alpha value.
  std::vector<std::vector<AlphaEntry>> nbrs;
};

inline constexpr int kDefaultAlphaNeighborhood = 20;

AlphaTable alpha_values(const Instance& inst, const Penalties& p, const OneTree& t,
                        int neighborhood = kDefaultAlphaNeighborhood);

struct AscentConfig {
  int max_iters = 0;  // cap on 1-tree evaluations; 0 = size-based default
  int patience = 0;     // initial schedule period; 0 = max(n/2, 100)
};

/// Sub-gradient ascent on w(pi) = L(T_pi) - 2*sum(pi). Returns the pi
/// with the best bound observed, w_scaled included.
Penalties subgradient_ascent(const Instance& inst, const AscentConfig& config = {});

}  // namespace tsp
