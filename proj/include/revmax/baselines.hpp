#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>

#include "revmax/model.hpp"
#include "revmax/report.hpp"

namespace revmax {

using RatingMap = std::unordered_map<std::uint64_t, double>;  // pack_pair(user,item)

inline std::uint64_t rating_key(UserId u, ItemId i) { return pack_pair(u, i); }

// TSV lines "user item rating", '#' comments allowed
RatingMap load_ratings(const std::string& path);

// Per user the k highest-rated items, repeated at every time step. Validity
// comes from user-index-order assignment: an item whose capacity is already
// taken is skipped for the user's next-ranked one. Revenue is evaluated under
// the full dynamic model.
SolveReport top_ra(const Instance& inst, const RatingMap& ratings);

// Same shape, ranked by horizon-averaged price * primitive adoption probability.
SolveReport top_re(const Instance& inst);

// G-Greedy selection as though every saturation factor were 1; the chosen
// strategy is then scored under the true factors.
SolveReport global_no(const Instance& inst);

// Exact optimum by enumerating every valid subset of the positive triples.
SolveReport brute_force_opt(const Instance& inst, std::uint32_t limit = 16);

// Exact optimum for T = 1 with singleton classes, via min-cost flow over the
// degree-constrained bipartite selection network. Refuses multi-item classes:
// same-time competition would make the edge weights interdependent.
SolveReport dcs_optimal_t1(const Instance& inst);

/// Bipartite selection network: source -> user arcs of capacity k, user ->
/// item arcs of capacity 1 carrying cost -price*probability, item -> sink
/// arcs of capacity q_i. Successive shortest augmenting paths with node
/// potentials; augmentation stops once the best path no longer gains revenue.
class FlowNetwork {
 public:
  explicit FlowNetwork(std::uint32_t num_nodes);
  // returns the arc id of the forward arc
  std::uint32_t add_arc(std::uint32_t from, std::uint32_t to, std::int64_t capacity,
                        double cost);
  // augments source->sink along negative-cost shortest paths until none remain
  void augment_while_profitable(std::uint32_t source, std::uint32_t sink);
  std::int64_t flow_on(std::uint32_t arc_id) const;
  double total_cost() const { return total_cost_; }

 private:
  struct Arc {
    std::uint32_t to;
    std::int64_t cap;
    double cost;
  };
  std::vector<Arc> arcs_;
  std::vector<std::vector<std::uint32_t>> adj_;
  std::vector<std::int64_t> initial_cap_;
  double total_cost_ = 0.0;
};

}  // namespace revmax
