#pragma once

#include <cstdint>
#include <span>

#include "revmax/model.hpp"
#include "revmax/report.hpp"

namespace revmax {

struct CapacityTailEstimate {
  enum class Method { exact_dp, monte_carlo };
  double value = 1.0;  // Pr[at most q_i - 1 other recommended users adopt]
  Method method = Method::exact_dp;
  std::uint64_t samples = 0;  // 0 for exact
  double std_error = 0.0;     // 0 for exact
};

// Exact capacity tail for (i,t): every other user v with a recommendation of
// i at tau <= t is an independent Bernoulli adopter with success probability
// sum over tau of the dynamic adoption probabilities (adoptions within a user
// are mutually exclusive, hence summable; capped at 1). The Poisson-binomial
// count is evaluated by an O(n * q_i) dynamic program.
CapacityTailEstimate capacity_tail_exact(const Strategy& s, ItemId i, TimeStep t,
                                         UserId exclude_user);

// Seeded Monte-Carlo estimate of the same Bernoulli model.
CapacityTailEstimate capacity_tail_mc(const Strategy& s, ItemId i, TimeStep t,
                                      UserId exclude_user, std::uint64_t samples,
                                      std::uint64_t seed);

// dynamic adoption probability of z scaled by the capacity tail
double effective_adoption_prob(const Strategy& s, const Triple& z,
                               const CapacityTailEstimate& tail);

// display constraint as partition-matroid independence: at most k triples in
// every (user,time) block
bool check_partition_matroid(const Instance& inst, std::span<const Triple> triples);

// R-RevMax objective: sum over triples of price * effective adoption
// probability, with exact capacity tails.
double rrevmax_objective(const Instance& inst, const Strategy& s);

// Hill-climbing over matroid-independent sets with add / delete / swap-1
// moves, seeded from the G-Greedy solution. Accepts strictly improving moves
// in a seed-determined scan order; stops at a local optimum or after
// max_iters accepted moves. Guarded to at most 2,000 positive triples.
SolveReport local_search_rrevmax(const Instance& inst, std::uint32_t max_iters,
                                 std::uint64_t seed);

}  // namespace revmax
