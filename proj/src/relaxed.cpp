#include "revmax/relaxed.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "revmax/greedy.hpp"
#include "revmax/revenue.hpp"
#include "revmax/rng.hpp"

namespace revmax {

namespace {

// one Bernoulli success probability per other user recommended item i by time t
std::vector<double> adopter_probs(const Strategy& s, ItemId i, TimeStep t,
                                  UserId exclude_user) {
  std::map<UserId, double> per_user;
  const auto& triples = s.triples();
  for (auto it = triples.begin(); it != triples.end(); ++it) {
    if (it->item != i || it->time > t || it->user == exclude_user) continue;
    per_user[it->user] += dynamic_adoption_prob(s, *it);
  }
  std::vector<double> probs;
  for (const auto& [user, p] : per_user) probs.push_back(std::min(p, 1.0));
  return probs;
}

std::uint32_t item_capacity(const Strategy& s, ItemId i) {
  return s.instance()->item(i).capacity;
}

}  // namespace

CapacityTailEstimate capacity_tail_exact(const Strategy& s, ItemId i, TimeStep t,
                                         UserId exclude_user) {
  const std::uint32_t q = item_capacity(s, i);
  CapacityTailEstimate est;
  est.method = CapacityTailEstimate::Method::exact_dp;
  if (q == 0) {
    est.value = 0.0;  // Pr[at most -1 adopt]
    return est;
  }
  const std::vector<double> probs = adopter_probs(s, i, t, exclude_user);
  if (probs.size() < q) {
    est.value = 1.0;
    return est;
  }
  // dp[j] = Pr[exactly j of the processed users adopt], j < q; mass at >= q is dropped
  std::vector<double> dp(q, 0.0);
  dp[0] = 1.0;
  for (const double p : probs) {
    for (std::uint32_t j = q - 1; j > 0; --j) dp[j] = dp[j] * (1.0 - p) + dp[j - 1] * p;
    dp[0] *= 1.0 - p;
  }
  double tail = 0.0;
  for (std::uint32_t j = 0; j < q; ++j) tail += dp[j];
  est.value = std::min(tail, 1.0);
  return est;
}

CapacityTailEstimate capacity_tail_mc(const Strategy& s, ItemId i, TimeStep t,
                                      UserId exclude_user, std::uint64_t samples,
                                      std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("capacity_tail_mc: samples must be >= 1");
  const std::uint32_t q = item_capacity(s, i);
  const std::vector<double> probs = adopter_probs(s, i, t, exclude_user);
  Rng rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t n = 0; n < samples; ++n) {
    std::uint32_t adopters = 0;
    for (const double p : probs)
      if (rng.uniform01() < p) ++adopters;
    if (adopters + 1 <= q) ++hits;  // adopters <= q - 1, safe for q = 0
  }
  CapacityTailEstimate est;
  est.method = CapacityTailEstimate::Method::monte_carlo;
  est.samples = samples;
  est.value = static_cast<double>(hits) / static_cast<double>(samples);
  est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(samples));
  return est;
}

double effective_adoption_prob(const Strategy& s, const Triple& z,
                               const CapacityTailEstimate& tail) {
  return dynamic_adoption_prob(s, z) * tail.value;
}

bool check_partition_matroid(const Instance& inst, std::span<const Triple> triples) {
  std::map<std::pair<UserId, TimeStep>, std::uint32_t> blocks;
  std::set<Triple> seen;
  for (const Triple& z : triples) {
    if (!seen.insert(z).second) continue;
    if (++blocks[{z.user, z.time}] > inst.display_k()) return false;
  }
  return true;
}

double rrevmax_objective(const Instance& inst, const Strategy& s) {
  double total = 0.0;
  for (const Triple& z : s.triples()) {
    const auto tail = capacity_tail_exact(s, z.item, z.time, z.user);
    total += inst.price(z.item, z.time) * effective_adoption_prob(s, z, tail);
  }
  return total;
}

SolveReport local_search_rrevmax(const Instance& inst, std::uint32_t max_iters,
                                 std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  if (inst.entries().size() > 2000)
    throw std::invalid_argument("local_search_rrevmax: instance exceeds the 2000-triple guard");

  std::vector<Triple> ground;
  for (const AdoptionEntry& a : inst.entries()) ground.push_back({a.user, a.item, a.time});
  Rng rng(seed);
  std::vector<std::uint32_t> order(ground.size());
  for (std::uint32_t e = 0; e < order.size(); ++e) order[e] = e;
  rng.shuffle(order);

  std::set<Triple> current(g_greedy(inst).strategy.triples());
  auto objective_of = [&](const std::set<Triple>& triples) {
    Strategy s(inst);
    for (const Triple& z : triples) s.insert(z);
    return rrevmax_objective(inst, s);
  };
  double value = objective_of(current);

  auto display_count = [&](const std::set<Triple>& triples, UserId u, TimeStep t) {
    std::uint32_t c = 0;
    for (const Triple& z : triples)
      if (z.user == u && z.time == t) ++c;
    return c;
  };

  constexpr double kImprove = 1e-12;
  std::uint32_t accepted = 0;
  bool improved = true;
  while (improved && accepted < max_iters) {
    improved = false;

    // deletes
    for (std::uint32_t idx : order) {
      const Triple& z = ground[idx];
      if (!current.count(z)) continue;
      std::set<Triple> next = current;
      next.erase(z);
      const double v = objective_of(next);
      if (v > value + kImprove) {
        current = std::move(next);
        value = v;
        improved = true;
        break;
      }
    }
    if (improved) {
      ++accepted;
      continue;
    }

    // adds
    for (std::uint32_t idx : order) {
      const Triple& z = ground[idx];
      if (current.count(z)) continue;
      if (display_count(current, z.user, z.time) >= inst.display_k()) continue;
      std::set<Triple> next = current;
      next.insert(z);
      const double v = objective_of(next);
      if (v > value + kImprove) {
        current = std::move(next);
        value = v;
        improved = true;
        break;
      }
    }
    if (improved) {
      ++accepted;
      continue;
    }

    // 1-for-1 swaps
    for (std::uint32_t out_idx : order) {
      const Triple& out = ground[out_idx];
      if (!current.count(out)) continue;
      for (std::uint32_t in_idx : order) {
        const Triple& in = ground[in_idx];
        if (current.count(in)) continue;
        std::set<Triple> next = current;
        next.erase(out);
        if (display_count(next, in.user, in.time) >= inst.display_k()) continue;
        next.insert(in);
        const double v = objective_of(next);
        if (v > value + kImprove) {
          current = std::move(next);
          value = v;
          improved = true;
          break;
        }
      }
      if (improved) break;
    }
    if (improved) ++accepted;
  }

  SolveReport report;
  report.algorithm = "rrevmax-ls";
  report.strategy = Strategy::from_triples(
      inst, std::vector<Triple>(current.begin(), current.end()));
  report.expected_revenue = revenue(inst, report.strategy);
  report.relaxed_objective = value;
  report.selections = report.strategy.size();
  report.repeat_histogram = compute_repeat_histogram(report.strategy);
  report.runtime_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return report;
}

}  // namespace revmax
