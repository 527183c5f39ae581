#pragma once

#include <optional>
#include <string>
#include <vector>

#include "revmax/baselines.hpp"
#include "revmax/datagen.hpp"
#include "revmax/greedy.hpp"
#include "revmax/model.hpp"
#include "revmax/report.hpp"

namespace revmax {

struct RunOptions {
  std::uint32_t perms = 5;        // rl_greedy permutation samples
  std::uint64_t seed = 42;
  std::vector<TimeStep> cutoffs;  // non-empty: staged sub-horizon solving
  std::optional<RatingMap> ratings;  // required by topra
  std::uint32_t brute_force_limit = 16;
  std::uint32_t local_search_iters = 200;
};

// names: gg, slg, rlg, topra, topre, ggno, bf, dcs, rrevmax-ls
SolveReport run_algorithm(const Instance& inst, const std::string& name,
                          const RunOptions& options);

struct CompareTable {
  struct Row {
    std::string algorithm;
    double expected_revenue;
    double runtime_ms;
    std::uint64_t selections;
    std::uint64_t recomputations;
  };
  std::uint64_t instance_fingerprint = 0;
  std::vector<Row> rows;
  std::vector<SolveReport> reports;  // same order as rows
};

// All algorithms run against the identical in-memory instance; the table
// records its fingerprint. With parallel=true the solvers run concurrently
// over the shared immutable instance; row order still follows `names`.
CompareTable compare_algorithms(const Instance& inst, const std::vector<std::string>& names,
                                const RunOptions& options, bool parallel = false);

struct ScalingRow {
  std::uint64_t triples;
  double seconds;  // g_greedy wall time, instance generation excluded
};

// Fig.-6 style sweep: one synthetic instance per requested triple count
// (num_users varies, everything else from `base`), timing g_greedy on each.
std::vector<ScalingRow> scaling_run(const std::vector<std::uint64_t>& triple_counts,
                                    SynthConfig base);

}  // namespace revmax
