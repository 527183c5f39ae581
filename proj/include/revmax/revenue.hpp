#pragma once

#include <cmath>
#include <unordered_map>
#include <vector>

#include "revmax/model.hpp"

namespace revmax {

// beta^m with the 0^0 := 1 convention, so beta = 0 only kills probabilities
// once there actually is repetition memory.
inline double saturation_pow(double beta, double memory) {
  if (memory == 0.0) return 1.0;
  if (beta == 0.0) return 0.0;
  return std::pow(beta, memory);
}

// Recency-weighted count of earlier same-class recommendations to the user:
// sum over placements (j,tau) of the user within class(i), tau < t, of
// 1/(t - tau). Zero at t = 1 (no history can exist).
double memory(const Strategy& s, UserId u, ItemId i, TimeStep t);

// Strategy-dependent adoption probability: the primitive probability damped
// by saturation and by competition from same-class recommendations at the
// same or earlier time steps. Returns 0 when z is not part of s.
double dynamic_adoption_prob(const Strategy& s, const Triple& z);

// Expected revenue: sum over triples of price times dynamic adoption
// probability. Defined for any strategy, valid or not.
double revenue(const Instance& inst, const Strategy& s);

/// Incremental evaluation state for greedy solvers. Keeps the current
/// strategy, the dynamic adoption probability of every committed triple, and
/// the running total, so a marginal revenue query costs only the committed
/// same-(user,class) neighborhood of the candidate.
class RevenueEvaluator {
 public:
  explicit RevenueEvaluator(const Instance& inst);

  const Instance& instance() const { return *inst_; }
  const Strategy& strategy() const { return strat_; }
  double total_revenue() const { return total_; }

  /// Rev(S + z) - Rev(S): the gain of z itself plus the (non-positive) change
  /// it inflicts on committed same-user same-class triples at the same or
  /// later time steps. Throws if z is already committed.
  double marginal_revenue(const Triple& z) const;

  /// Adds z, updating the affected cached probabilities and the total by
  /// exactly marginal_revenue(z). Throws if z is already committed.
  void commit(const Triple& z);

  // dynamic adoption probability of a committed triple; 0 if not committed
  double cached_probability(const Triple& z) const;

 private:
  struct CommitRec {
    TimeStep time;
    ItemId item;
    double prim;   // primitive adoption probability
    double price;
    double beta;
    double q;      // cached dynamic adoption probability
  };

  struct Pending {
    double q_new;   // dynamic probability z would take
    double gain;
    double loss;
  };
  Pending evaluate(const Triple& z, const std::vector<CommitRec>* recs) const;
  const std::vector<CommitRec>* recs_for(UserId u, ClassId c) const;

  const Instance* inst_;
  Strategy strat_;
  std::unordered_map<std::uint64_t, std::vector<CommitRec>> sets_;
  double total_ = 0.0;
  double kahan_c_ = 0.0;
};

}  // namespace revmax
