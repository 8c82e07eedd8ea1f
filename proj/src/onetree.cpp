#include "tsp/onetree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tsp {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

struct Mst {
  std::vector<int> parent;  // rooted at 0
  std::int64_t total = 0;
};

// Dense Prim. Strict < on both scans resolves cost ties toward the
// smaller index, so the tree is the same on every platform.
Mst prim(const Instance& inst, const std::vector<std::int64_t>& pi) {
  int n = inst.n;
  std::vector<std::int64_t> key(n, kInf);
  std::vector<int> parent(n, -1);
  std::vector<char> done(n, 0);
  key[0] = 0;
  std::int64_t total = 0;
  for (int round = 0; round < n; ++round) {
    int u = -1;
    std::int64_t best = kInf;
    for (int j = 0; j < n; ++j)
      if (!done[j] && key[j] < best) {
        best = key[j];
        u = j;
      }
    done[u] = 1;
    if (parent[u] >= 0) total += key[u];
    for (int j = 0; j < n; ++j) {
      if (done[j]) continue;
      std::int64_t c = penalized_cost_scaled(inst, pi, u, j);
      if (c < key[j]) {
        key[j] = c;
        parent[j] = u;
      }
    }
  }
  return {std::move(parent), total};
}

int auto_iters(int n) {
  std::int64_t by_work = 750'000'000 / (static_cast<std::int64_t>(n) * n + 1);
  return static_cast<int>(std::max<std::int64_t>(by_work, 100));
}

}  // namespace

double penalized_cost(const Instance& inst, const Penalties& p, int i, int j) {
  return static_cast<double>(penalized_cost_scaled(inst, p.pi, i, j)) / kPiScale;
}

bool OneTree::is_tree_edge(int i, int j) const {
  if (i == special) return j == special_edges[0] || j == special_edges[1];
  if (j == special) return i == special_edges[0] || i == special_edges[1];
  return parent[i] == j || parent[j] == i;
}

OneTree minimum_one_tree(const Instance& inst, const Penalties& p) {
  int n = inst.n;
  if (n < 3) throw std::invalid_argument("1-tree needs at least 3 cities");
  Mst mst = prim(inst, p.pi);

  std::vector<int> deg(n, 0);
  for (int u = 0; u < n; ++u)
    if (mst.parent[u] >= 0) {
      ++deg[u];
      ++deg[mst.parent[u]];
    }

  // Special node: the leaf whose second nearest neighbor is farthest.
  int v = -1, v_neighbor = -1;
  std::int64_t v_second = -1;
  for (int u = 0; u < n; ++u) {
    if (deg[u] != 1) continue;
    int t = mst.parent[u];
    if (t < 0)  // root leaf: its single child is the tree neighbor
      for (int j = 0; j < n; ++j)
        if (mst.parent[j] == u) {
          t = j;
          break;
        }
    std::int64_t second = kInf;
    for (int j = 0; j < n; ++j) {
      if (j == u || j == t) continue;
      second = std::min(second, penalized_cost_scaled(inst, p.pi, u, j));
    }
    if (second > v_second) {
      v_second = second;
      v = u;
      v_neighbor = t;
    }
  }

  // Second cheapest edge at v (the cheapest is its tree edge).
  int j2 = -1;
  std::int64_t c2 = kInf;
  for (int j = 0; j < n; ++j) {
    if (j == v || j == v_neighbor) continue;
    std::int64_t c = penalized_cost_scaled(inst, p.pi, v, j);
    if (c < c2) {
      c2 = c;
      j2 = j;
    }
  }

  OneTree tree;
  tree.special = v;
  tree.special_edges = {v_neighbor, j2};
  tree.parent = std::move(mst.parent);
  tree.total_scaled = mst.total + c2;
  // Detach v so parent describes the spanning tree over V \ {v}.
  if (tree.parent[v] < 0) {
    tree.parent[v_neighbor] = -1;  // v was the Prim root; re-root at its child
  }
  tree.parent[v] = -1;

  tree.degree.assign(n, 0);
  for (int u = 0; u < n; ++u)
    if (tree.parent[u] >= 0) {
      ++tree.degree[u];
      ++tree.degree[tree.parent[u]];
    }
  tree.degree[v] = 2;
  ++tree.degree[v_neighbor];
  ++tree.degree[j2];
  return tree;
}

AlphaTable alpha_values(const Instance& inst, const Penalties& p, const OneTree& t,
                        int neighborhood) {
  int n = inst.n;
  int v = t.special;
  std::int64_t c2 = penalized_cost_scaled(inst, p.pi, v, t.special_edges[1]);

  // Adjacency of the spanning tree over V \ {v}, with edge costs.
  std::vector<std::vector<std::pair<int, std::int64_t>>> adj(n);
  for (int u = 0; u < n; ++u) {
    int w = t.parent[u];
    if (w < 0) continue;
    std::int64_t c = penalized_cost_scaled(inst, p.pi, u, w);
    adj[u].push_back({w, c});
    adj[w].push_back({u, c});
  }

  AlphaTable table;
  table.nbrs.resize(n);
  int take_max = std::min(neighborhood, n - 1);

  std::vector<std::int64_t> beta(n, 0);
  std::vector<int> stack;
  std::vector<char> seen(n, 0);
  std::vector<std::pair<std::int64_t, int>> order;
  order.reserve(n - 1);

  for (int i = 0; i < n; ++i) {
    if (i != v) {
      // beta[j] = largest tree-edge cost on the i..j path, so tree
      // edges come out with alpha exactly 0.
      beta[i] = std::numeric_limits<std::int64_t>::min();
      stack.assign(1, i);
      seen.assign(n, 0);
      seen[i] = 1;
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (auto [w, c] : adj[u]) {
          if (seen[w]) continue;
          seen[w] = 1;
          beta[w] = std::max(beta[u], c);
          stack.push_back(w);
        }
      }
    }

    order.clear();
    for (int j = 0; j < n; ++j)
      if (j != i) order.push_back({penalized_cost_scaled(inst, p.pi, i, j), j});
    std::partial_sort(order.begin(), order.begin() + take_max, order.end());

    auto& out = table.nbrs[i];
    out.reserve(take_max);
    for (int k = 0; k < take_max; ++k) {
      auto [cost, j] = order[k];
      std::int64_t a;
      if (i == v || j == v) {
        a = t.is_tree_edge(i, j) ? 0 : cost - c2;
      } else {
        a = cost - beta[j];
      }
      out.push_back({j, a});
    }
  }
  return table;
}

Penalties subgradient_ascent(const Instance& inst, const AscentConfig& config) {
  int n = inst.n;
  Penalties p = Penalties::zeros(n);
  OneTree tree = minimum_one_tree(inst, p);
  std::int64_t w = tree.total_scaled;

  std::vector<std::int64_t> best_pi = p.pi;
  std::int64_t best_w = w;

  auto is_tour = [&] {
    return std::all_of(tree.degree.begin(), tree.degree.end(),
                       [](int d) { return d == 2; });
  };

  const int cap = config.max_iters > 0 ? config.max_iters : auto_iters(n);
  int patience = config.patience > 0 ? config.patience : std::clamp(n / 16, 3, 10);
  std::int64_t step = std::max<std::int64_t>(1, w / (2 * n));
  int bad = 0;

  std::vector<std::int64_t> dir(n, 0), prev(n, 0);
  for (int it = 0; it < cap && !is_tour() && step > 0; ++it) {
    for (int i = 0; i < n; ++i) {
      dir[i] = 7 * (tree.degree[i] - 2) + 3 * prev[i] / 10;
      p.pi[i] += step * dir[i] / 10;
    }
    prev = dir;
    tree = minimum_one_tree(inst, p);
    std::int64_t sum_pi = std::accumulate(p.pi.begin(), p.pi.end(), std::int64_t{0});
    w = tree.total_scaled - 2 * sum_pi;
    if (w > best_w) {
      best_w = w;
      best_pi = p.pi;
      bad = 0;
    } else if (++bad >= patience) {
      step /= 2;
      bad = 0;
    }
  }
  return Penalties{std::move(best_pi), best_w};
}

}  // namespace tsp
