// Brute-force reference implementations the fast code is checked
// against. Everything here is exponential or factorial and meant for
// single-digit n only.
#pragma once

#include "tsp/kopt.hpp"
#include "tsp/onetree.hpp"
#include "tsp/tsplib.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

inline tsp::Instance random_euclidean(std::mt19937_64& rng, int n, int coord_max = 400) {
  std::uniform_int_distribution<int> coord(0, coord_max);
  tsp::Instance inst;
  inst.metric = tsp::Metric::Euc2D;
  inst.n = n;
  inst.name = "random" + std::to_string(n);
  for (int i = 0; i < n; ++i) {
    inst.xs.push_back(coord(rng));
    inst.ys.push_back(coord(rng));
  }
  inst.finalize();
  return inst;
}

/// Exact optimum by enumerating all (n-1)! tours with city 0 fixed.
inline tsp::Length exhaustive_optimum(const tsp::Instance& inst) {
  std::vector<int> perm(inst.n);
  std::iota(perm.begin(), perm.end(), 0);
  tsp::Length best = std::numeric_limits<tsp::Length>::max();
  do {
    best = std::min(best, tour_length(inst, perm));
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return best;
}

/// Same enumeration, keeping the minimizing permutation.
inline std::vector<int> exhaustive_optimum_tour(const tsp::Instance& inst) {
  std::vector<int> perm(inst.n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best_perm = perm;
  tsp::Length best = std::numeric_limits<tsp::Length>::max();
  do {
    tsp::Length len = tour_length(inst, perm);
    if (len < best) {
      best = len;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return best_perm;
}

/// First-improvement 2-opt descent by segment reversal.
inline tsp::Length two_opt_descent(const tsp::Instance& inst, std::vector<int> order) {
  const int n = inst.n;
  tsp::Length len = tour_length(inst, order);
  bool improved = true;
  while (improved) {
    improved = false;
    for (int i = 0; i < n - 1 && !improved; ++i) {
      for (int j = i + 1; j < n && !improved; ++j) {
        std::reverse(order.begin() + i, order.begin() + j + 1);
        tsp::Length trial = tour_length(inst, order);
        if (trial < len) {
          len = trial;
          improved = true;
        } else {
          std::reverse(order.begin() + i, order.begin() + j + 1);
        }
      }
    }
  }
  return len;
}

/// All spanning trees of m labeled nodes via Pruefer sequences.
/// Calls visit(edges) for each tree; edges are index pairs into 0..m-1.
template <typename Visit>
void for_each_spanning_tree(int m, Visit visit) {
  std::vector<std::pair<int, int>> edges;
  if (m == 1) {
    visit(edges);
    return;
  }
  if (m == 2) {
    edges = {{0, 1}};
    visit(edges);
    return;
  }
  int len = m - 2;
  std::vector<int> seq(len, 0);
  std::vector<int> degree(m);
  while (true) {
    // decode
    std::fill(degree.begin(), degree.end(), 1);
    for (int s : seq) ++degree[s];
    edges.clear();
    std::vector<int> deg = degree;
    for (int s : seq) {
      for (int leaf = 0; leaf < m; ++leaf)
        if (deg[leaf] == 1) {
          edges.push_back({leaf, s});
          --deg[leaf];
          --deg[s];
          break;
        }
    }
    int a = -1;
    for (int i = 0; i < m; ++i)
      if (deg[i] == 1) {
        if (a < 0) a = i;
        else edges.push_back({a, i});
      }
    visit(edges);
    // next sequence
    int pos = len - 1;
    while (pos >= 0 && seq[pos] == m - 1) seq[pos--] = 0;
    if (pos < 0) break;
    ++seq[pos];
  }
}

/// Reference 1-tree quantities for a fixed special node: enumerates
/// every spanning tree of V \ {special}, recording the overall minimum
/// and, per edge, the minimum among trees containing that edge.
class OneTreeOracle {
 public:
  OneTreeOracle(const tsp::Instance& inst, const tsp::Penalties& pen, int special)
      : inst_(inst), pen_(pen), n_(inst.n), v_(special) {
    for (int i = 0; i < n_; ++i)
      if (i != v_) others_.push_back(i);
    int m = n_ - 1;
    best_st_ = std::numeric_limits<std::int64_t>::max();
    forced_st_.assign(static_cast<size_t>(n_) * n_, std::numeric_limits<std::int64_t>::max());
    for_each_spanning_tree(m, [&](const std::vector<std::pair<int, int>>& edges) {
      std::int64_t cost = 0;
      for (auto [a, b] : edges)
        cost += tsp::penalized_cost_scaled(inst_, pen_.pi, others_[a], others_[b]);
      best_st_ = std::min(best_st_, cost);
      for (auto [a, b] : edges) {
        int i = others_[a], j = others_[b];
        auto& slot = forced_st_[static_cast<size_t>(std::min(i, j)) * n_ + std::max(i, j)];
        slot = std::min(slot, cost);
      }
    });
  }

  std::int64_t cost_at_v(int j) const {
    return tsp::penalized_cost_scaled(inst_, pen_.pi, v_, j);
  }

  /// Cheapest pair of distinct edges at v, optionally forcing one of
  /// them to be (v, forced_j).
  std::int64_t best_pair_at_v(int forced_j = -1) const {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (int a = 0; a < n_; ++a) {
      if (a == v_ || a == forced_j) continue;
      if (forced_j >= 0) {
        best = std::min(best, cost_at_v(a) + cost_at_v(forced_j));
      } else {
        for (int b = a + 1; b < n_; ++b) {
          if (b == v_) continue;
          best = std::min(best, cost_at_v(a) + cost_at_v(b));
        }
      }
    }
    return best;
  }

  std::int64_t min_total() const { return best_st_ + best_pair_at_v(); }

  /// L(T+(i,j)) with the edge forced in, same special node.
  std::int64_t forced_total(int i, int j) const {
    if (i == v_ || j == v_) {
      int other = i == v_ ? j : i;
      return best_st_ + best_pair_at_v(other);
    }
    return forced_st_[static_cast<size_t>(std::min(i, j)) * n_ + std::max(i, j)] +
           best_pair_at_v();
  }

  std::int64_t alpha(int i, int j) const { return forced_total(i, j) - min_total(); }

 private:
  const tsp::Instance& inst_;
  const tsp::Penalties& pen_;
  int n_, v_;
  std::vector<int> others_;
  std::int64_t best_st_;
  std::vector<std::int64_t> forced_st_;
};

/// O(n) reference for close feasibility: rewires the neighbor structure
/// edge by edge and walks the result. Returns the new tour order when
/// the rewiring is a single Hamiltonian cycle, empty otherwise.
inline std::vector<int> trace_close(const tsp::MoveState& ms, const tsp::Tour& t) {
  int n = t.n();
  std::vector<std::array<int, 2>> nb(n);
  for (int c = 0; c < n; ++c) nb[c] = {t.prev(c), t.next(c)};

  auto drop = [&](int a, int b) {
    for (int& x : nb[a])
      if (x == b) {
        x = -1;
        return true;
      }
    return false;
  };
  auto attach = [&](int a, int b) {
    for (int& x : nb[a])
      if (x == b) return false;  // parallel edge
    for (int& x : nb[a])
      if (x < 0) {
        x = b;
        return true;
      }
    return false;
  };

  int m = static_cast<int>(ms.p.size());
  for (int i = 0; i + 1 < m; i += 2)
    if (!drop(ms.p[i], ms.p[i + 1]) || !drop(ms.p[i + 1], ms.p[i])) return {};
  auto add_edge = [&](int a, int b) { return attach(a, b) && attach(b, a); };
  for (int i = 1; i + 1 < m; i += 2)
    if (!add_edge(ms.p[i], ms.p[i + 1])) return {};
  if (!add_edge(ms.p[m - 1], ms.p[0])) return {};

  std::vector<int> cycle;
  int prev = -1, cur = ms.p[0];
  do {
    cycle.push_back(cur);
    int nxt = nb[cur][0] == prev ? nb[cur][1] : nb[cur][0];
    prev = cur;
    cur = nxt;
  } while (cur != ms.p[0] && static_cast<int>(cycle.size()) <= n);
  if (static_cast<int>(cycle.size()) != n) return {};
  return cycle;
}

}  // namespace oracle
