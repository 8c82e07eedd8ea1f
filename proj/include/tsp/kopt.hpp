#pragma once

#include "tsp/onetree.hpp"
#include "tsp/tsplib.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace tsp {

/// Depth cap for sequential moves.
inline constexpr int kMaxKOpt = 5;

/// Cyclic tour as a permutation plus its inverse.
class Tour {
 public:
  Tour() = default;
  explicit Tour(std::vector<int> order) { set_order(std::move(order)); }

  int n() const { return static_cast<int>(order_.size()); }
  const std::vector<int>& order() const { return order_; }
  int at(int idx) const { return order_[idx]; }
  int position(int city) const { return pos_[city]; }

  int next(int city) const {
    int idx = pos_[city] + 1;
    return order_[idx == n() ? 0 : idx];
  }
  int prev(int city) const {
    int idx = pos_[city];
    return order_[idx == 0 ? n() - 1 : idx - 1];
  }
  std::pair<int, int> neighbors(int city) const { return {prev(city), next(city)}; }
  bool has_edge(int a, int b) const { return next(a) == b || next(b) == a; }

  void set_order(std::vector<int> order);
  bool valid() const;

 private:
  std::vector<int> order_, pos_;
};

/// State of one sequential k-opt attempt: the endpoint chain
/// p1..p_{2k}, with removed edges x_j = (p_{2j-1}, p_{2j}) and added
/// edges y_j = (p_{2j}, p_{2j+1}); the closing edge (p_{2k}, p1) is
/// implicit. gain_sum covers the complete (x_j, y_j) pairs so far, in
/// scaled penalized units.
struct MoveState {
  std::vector<int> p;
  std::int64_t gain_sum = 0;

  int k() const { return static_cast<int>(p.size()) / 2; }
  int last() const { return p.back(); }
  bool in_chain(int city) const;
  bool is_removed(int a, int b) const;
  bool is_added(int a, int b) const;

  static MoveState start(int p1, int p2) { return MoveState{{p1, p2}, 0}; }

  /// Cost of the newest removed edge x_k.
  std::int64_t last_removed_cost(const Instance& inst, const Penalties& pen) const;

  /// Gain if the chain were extended with added edge (p_{2k}, action):
  /// gain_sum + l(x_k) - C(p_{2k}, action). Must stay positive.
  std::int64_t extension_gain(const Instance& inst, const Penalties& pen, int action) const;

  /// Commits action = p_{2k+1} and next = p_{2k+2}, folding the newest
  /// (x, y) pair into gain_sum.
  void extend(const Instance& inst, const Penalties& pen, int action, int next);
};

/// Total improvement if the move closes now, in scaled units. Penalty
/// terms cancel on a closed move, so this is exactly kPiScale times
/// the plain length decrease.
std::int64_t close_gain_scaled(const MoveState& ms, const Instance& inst,
                               const Penalties& pen);
double close_gain(const MoveState& ms, const Instance& inst, const Penalties& pen);

/// Whether replacing the removed edges with the added ones (closing
/// edge included) leaves a single Hamiltonian cycle.
bool is_feasible_close(const MoveState& ms, const Tour& t);

/// Rewrites t to the closed move's tour. Requires a feasible close.
void apply_move(Tour& t, const MoveState& ms);

}  // namespace tsp
