#pragma once

#include <cstdint>
#include <vector>

#include "revmax/model.hpp"
#include "revmax/report.hpp"
#include "revmax/revenue.hpp"

namespace revmax {

struct GreedyOptions {
  // one flat indexed heap over all triples instead of the two-level layout;
  // behavior-preserving, used for equivalence checks
  bool flat_heap = false;
  // refresh every affected key right after each commit instead of lazily at
  // the heap root; behavior-preserving but does strictly more recomputation
  bool eager = false;
};

// Global greedy: repeatedly commits the fresh heap root with the largest
// strictly positive marginal revenue, with lazy forward soundness coming from
// submodularity (stale keys only overestimate).
SolveReport g_greedy(const Instance& inst, const GreedyOptions& options = {});

// Chronological per-time-step greedy.
SolveReport sl_greedy(const Instance& inst);

// Best of n_perms per-time-step greedy passes over distinct sampled
// permutations of [T]. Deterministic for a fixed seed; ties between passes go
// to the earlier permutation index.
SolveReport rl_greedy(const Instance& inst, std::uint32_t n_perms, std::uint64_t seed);

// test hook behind rl_greedy: run the per-time-step greedy under explicit
// time orderings and keep the best pass
SolveReport solve_with_permutations(const Instance& inst,
                                    const std::vector<std::vector<TimeStep>>& perms);

std::vector<std::vector<TimeStep>> sample_permutations(const std::vector<TimeStep>& times,
                                                       std::uint32_t n,
                                                       std::uint64_t seed);

enum class InnerSolver { global, sequential, randomized };

// Solves [T] split at the cutoffs sub-horizon after sub-horizon; earlier
// commitments stay fixed and condition later marginal revenues.
SolveReport staged_solve(const Instance& inst, const std::vector<TimeStep>& cutoffs,
                         InnerSolver inner, std::uint32_t n_perms = 1,
                         std::uint64_t seed = 0);

}  // namespace revmax
