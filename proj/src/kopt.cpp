#include "tsp/kopt.hpp"

#include <algorithm>
#include <array>
#include <cassert>

namespace tsp {

void Tour::set_order(std::vector<int> order) {
  order_ = std::move(order);
  pos_.assign(order_.size(), -1);
  for (int idx = 0; idx < n(); ++idx) pos_[order_[idx]] = idx;
}

bool Tour::valid() const {
  if (order_.size() != pos_.size()) return false;
  std::vector<char> seen(order_.size(), 0);
  for (int idx = 0; idx < n(); ++idx) {
    int c = order_[idx];
    if (c < 0 || c >= n() || seen[c] || pos_[c] != idx) return false;
    seen[c] = 1;
  }
  return true;
}

bool MoveState::in_chain(int city) const {
  return std::find(p.begin(), p.end(), city) != p.end();
}

bool MoveState::is_removed(int a, int b) const {
  for (size_t i = 0; i + 1 < p.size(); i += 2)
    if ((p[i] == a && p[i + 1] == b) || (p[i] == b && p[i + 1] == a)) return true;
  return false;
}

bool MoveState::is_added(int a, int b) const {
  for (size_t i = 1; i + 1 < p.size(); i += 2)
    if ((p[i] == a && p[i + 1] == b) || (p[i] == b && p[i + 1] == a)) return true;
  return false;
}

std::int64_t MoveState::last_removed_cost(const Instance& inst, const Penalties& pen) const {
  size_t m = p.size();
  return penalized_cost_scaled(inst, pen.pi, p[m - 2], p[m - 1]);
}

std::int64_t MoveState::extension_gain(const Instance& inst, const Penalties& pen,
                                       int action) const {
  return gain_sum + last_removed_cost(inst, pen) -
         penalized_cost_scaled(inst, pen.pi, p.back(), action);
}

void MoveState::extend(const Instance& inst, const Penalties& pen, int action, int next) {
  gain_sum += last_removed_cost(inst, pen) -
              penalized_cost_scaled(inst, pen.pi, p.back(), action);
  p.push_back(action);
  p.push_back(next);
}

std::int64_t close_gain_scaled(const MoveState& ms, const Instance& inst,
                               const Penalties& pen) {
  return ms.gain_sum + ms.last_removed_cost(inst, pen) -
         penalized_cost_scaled(inst, pen.pi, ms.p.back(), ms.p.front());
}

double close_gain(const MoveState& ms, const Instance& inst, const Penalties& pen) {
  return static_cast<double>(close_gain_scaled(ms, inst, pen)) / kPiScale;
}

namespace {

// The k removed edges cut the tour into k arcs whose endpoints are
// exactly the chain cities (each chain city sits in exactly one removed
// edge, so cut and intact gaps alternate around the sorted chain).
struct Segments {
  int m = 0;                              // 2k
  std::array<int, 2 * kMaxKOpt> city;     // chain cities by tour position
  std::array<int, 2 * kMaxKOpt> seg_to;   // sorted index of the arc's other end
  std::array<int, 2 * kMaxKOpt> add_to;   // sorted index reached by the added edge
  bool ok = false;
};

Segments build_segments(const MoveState& ms, const Tour& t) {
  Segments s;
  int k = ms.k();
  s.m = 2 * k;
  for (int i = 0; i < s.m; ++i) s.city[i] = ms.p[i];
  std::sort(s.city.begin(), s.city.begin() + s.m,
            [&](int a, int b) { return t.position(a) < t.position(b); });

  // Gaps between sorted neighbors are alternately removed edges and
  // intact arcs; anything else means the chain is not a valid state.
  std::array<char, 2 * kMaxKOpt> cut{};
  int cuts = 0;
  for (int i = 0; i < s.m; ++i) {
    int a = s.city[i], b = s.city[(i + 1) % s.m];
    cut[i] = ms.is_removed(a, b) && t.has_edge(a, b);
    cuts += cut[i];
  }
  if (cuts != k) return s;
  for (int i = 0; i < s.m; ++i)
    if (cut[i] == cut[(i + 1) % s.m]) return s;

  for (int i = 0; i < s.m; ++i) {
    int nxt = (i + 1) % s.m;
    if (!cut[i]) {
      s.seg_to[i] = nxt;
      s.seg_to[nxt] = i;
    }
  }

  auto sorted_index = [&](int city) {
    for (int i = 0; i < s.m; ++i)
      if (s.city[i] == city) return i;
    return -1;
  };
  auto join = [&](int a, int b) {
    int ia = sorted_index(a), ib = sorted_index(b);
    s.add_to[ia] = ib;
    s.add_to[ib] = ia;
  };
  for (int i = 1; i + 1 < s.m; i += 2) join(ms.p[i], ms.p[i + 1]);
  join(ms.p[s.m - 1], ms.p[0]);

  s.ok = true;
  return s;
}

}  // namespace

bool is_feasible_close(const MoveState& ms, const Tour& t) {
  int k = ms.k();
  if (k < 2) return false;
  Segments s = build_segments(ms, t);
  if (!s.ok) return false;

  int start = 0;
  while (s.city[start] != ms.p[0]) ++start;
  int cur = start, arcs = 0;
  do {
    cur = s.add_to[s.seg_to[cur]];
    ++arcs;
  } while (cur != start);
  return arcs == k;
}

void apply_move(Tour& t, const MoveState& ms) {
  Segments s = build_segments(ms, t);
  assert(s.ok);
  int n = t.n();
  std::vector<int> out;
  out.reserve(n);

  int start = 0;
  while (s.city[start] != ms.p[0]) ++start;
  int cur = start;
  for (int arc = 0; arc < ms.k(); ++arc) {
    int exit = s.seg_to[cur];
    int pa = t.position(s.city[cur]);
    int pb = t.position(s.city[exit]);
    // Arc runs forward from the lower sorted index; the wrap pair
    // (m-1, 0) also runs forward, through position 0.
    int dir = (exit == (cur + 1) % s.m) ? 1 : n - 1;
    for (int q = pa;; q = (q + dir) % n) {
      out.push_back(t.at(q));
      if (q == pb) break;
    }
    cur = s.add_to[exit];
  }
  assert(static_cast<int>(out.size()) == n);
  t.set_order(std::move(out));
}

}  // namespace tsp
