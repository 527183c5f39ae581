#include "revmax/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "revmax/heaps.hpp"
#include "revmax/rng.hpp"

namespace revmax {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Counters {
  std::uint64_t recomputations = 0;
};

std::uint64_t selection_cap(const Instance& inst) {
  return static_cast<std::uint64_t>(inst.display_k()) * inst.horizon() * inst.num_users();
}

std::uint32_t class_stamp(const RevenueEvaluator& ev, UserId u, ClassId c) {
  return static_cast<std::uint32_t>(ev.strategy().user_class_placements(u, c).size());
}

// capacity exhaustion is permanent for a (user,item) pair once the user is
// not already among the item's takers
bool capacity_blocked(const RevenueEvaluator& ev, const Instance& inst, UserId u,
                      ItemId i) {
  const Strategy& s = ev.strategy();
  return s.item_user_count(i) >= inst.item(i).capacity && !s.item_has_user(i, u);
}

bool slot_full(const RevenueEvaluator& ev, const Instance& inst, UserId u, TimeStep t) {
  return ev.strategy().user_time_count(u, t) >= inst.display_k();
}

// Candidate triples of one run, restricted to a time window. Entry ids are
// positions in `entries`, which inherits the instance's (user,item,time)
// order, so id comparisons implement the lexicographic tie-break. Pairs that
// share a (user, item-class) are clustered into groups; a group's commit
// count is the staleness stamp source for all of its entries.
struct Candidates {
  struct Entry {
    Triple z;
    double prim;
    std::uint32_t pair;
  };
  std::vector<Entry> entries;
  std::vector<std::pair<UserId, ItemId>> pairs;
  std::vector<std::uint32_t> group_of_pair;
  std::vector<std::pair<UserId, ClassId>> groups;

  static Candidates build(const Instance& inst, TimeStep t_lo, TimeStep t_hi) {
    Candidates c;
    if (t_lo == 1 && t_hi == inst.horizon()) {
      c.entries.reserve(inst.entries().size());
      c.pairs.reserve(inst.pairs().size());
    }
    std::unordered_map<std::uint64_t, std::uint32_t> group_index;
    for (const Instance::Pair& p : inst.pairs()) {
      bool any = false;
      for (std::uint32_t e = p.begin; e < p.end; ++e) {
        const AdoptionEntry& a = inst.entries()[e];
        if (a.time < t_lo || a.time > t_hi) continue;
        if (!any) {
          c.pairs.emplace_back(p.user, p.item);
          const ClassId cls = inst.item_class(p.item);
          auto [it, fresh] = group_index.try_emplace(
              pack_pair(p.user, cls), static_cast<std::uint32_t>(c.groups.size()));
          if (fresh) c.groups.emplace_back(p.user, cls);
          c.group_of_pair.push_back(it->second);
          any = true;
        }
        c.entries.push_back({{a.user, a.item, a.time}, a.prob,
                             static_cast<std::uint32_t>(c.pairs.size() - 1)});
      }
    }
    return c;
  }
};

// Dense constraint/staleness bookkeeping for one global-greedy window; kept
// in flat arrays so the hot pop loop does no hashing. Mirrors the strategy
// indexes exactly (commits flow through both).
struct WindowState {
  std::vector<std::uint32_t> slot_count;   // (user, time) -> committed count
  std::vector<std::uint32_t> item_count;   // item -> distinct committed users
  std::vector<std::uint8_t> pair_taken;    // pair -> user already holds the item
  std::vector<std::uint32_t> group_count;  // group -> committed same-(user,class)
  TimeStep horizon;

  WindowState(const Instance& inst, const Candidates& cand, const Strategy& committed)
      : slot_count(static_cast<std::size_t>(inst.num_users()) * inst.horizon(), 0),
        item_count(inst.items().size(), 0),
        pair_taken(cand.pairs.size(), 0),
        group_count(cand.groups.size(), 0),
        horizon(inst.horizon()) {
    if (committed.empty()) return;
    for (const Triple& z : committed.triples())
      slot_count[static_cast<std::size_t>(z.user) * horizon + (z.time - 1)]++;
    for (ItemId i = 0; i < item_count.size(); ++i)
      item_count[i] = committed.item_user_count(i);
    for (std::uint32_t p = 0; p < cand.pairs.size(); ++p)
      pair_taken[p] = committed.item_has_user(cand.pairs[p].second, cand.pairs[p].first);
    for (std::uint32_t g = 0; g < cand.groups.size(); ++g)
      group_count[g] = static_cast<std::uint32_t>(
          committed.user_class_placements(cand.groups[g].first, cand.groups[g].second)
              .size());
  }

  bool capacity_blocked(const Instance& inst, std::uint32_t pair, ItemId item) const {
    return item_count[item] >= inst.item(item).capacity && !pair_taken[pair];
  }
  bool slot_full(const Instance& inst, UserId u, TimeStep t) const {
    return slot_count[static_cast<std::size_t>(u) * horizon + (t - 1)] >= inst.display_k();
  }
  void on_commit(std::uint32_t pair, std::uint32_t group, const Triple& z) {
    slot_count[static_cast<std::size_t>(z.user) * horizon + (z.time - 1)]++;
    if (!pair_taken[pair]) {
      pair_taken[pair] = 1;
      item_count[z.item]++;
    }
    group_count[group]++;
  }
};

void run_global_window(RevenueEvaluator& ev, TimeStep t_lo, TimeStep t_hi,
                       const GreedyOptions& opt, Counters& counters) {
  const Instance& inst = ev.instance();
  const Candidates cand = Candidates::build(inst, t_lo, t_hi);
  const std::uint32_t n = static_cast<std::uint32_t>(cand.entries.size());
  if (n == 0) return;
  const std::uint64_t cap = selection_cap(inst);
  WindowState state(inst, cand, ev.strategy());

  // group -> entry ids, needed only for eager refresh
  std::vector<std::vector<std::uint32_t>> group_entries;
  if (opt.eager) {
    group_entries.resize(cand.groups.size());
    for (std::uint32_t e = 0; e < n; ++e)
      group_entries[cand.group_of_pair[cand.entries[e].pair]].push_back(e);
  }
  // pair -> entry ids; the flat layout still refreshes pair-at-a-time so the
  // two layouts stay step-for-step identical
  std::vector<std::vector<std::uint32_t>> pair_entries;
  if (opt.flat_heap) {
    pair_entries.resize(cand.pairs.size());
    for (std::uint32_t e = 0; e < n; ++e) pair_entries[cand.entries[e].pair].push_back(e);
  }

  TwoLevelHeap two_level(opt.flat_heap ? 0 : n,
                         opt.flat_heap ? 0 : static_cast<std::uint32_t>(cand.pairs.size()));
  IndexedMaxHeap flat(opt.flat_heap ? n : 0);
  std::vector<std::uint32_t> flat_flags(opt.flat_heap ? n : 0, 0);

  // initial keys are the no-competition bound price * primitive probability,
  // stamped 0; with prior commitments (staged windows) they read as stale and
  // get refreshed before any commit
  for (std::uint32_t e = 0; e < n; ++e) {
    const auto& entry = cand.entries[e];
    const double key = entry.prim * inst.price(entry.z.item, entry.z.time);
    if (opt.flat_heap)
      flat.push(e, key);
    else
      two_level.stage(e, entry.pair, key);
  }
  if (!opt.flat_heap) two_level.finish_build();

  auto entry_live = [&](std::uint32_t e) {
    return opt.flat_heap ? flat.contains(e) : two_level.entry_live(e);
  };
  auto refresh_entry = [&](std::uint32_t e, std::uint32_t stamp) {
    const double key = ev.marginal_revenue(cand.entries[e].z);
    counters.recomputations++;
    if (opt.flat_heap) {
      flat_flags[e] = stamp;
      flat.update(e, key);
    } else {
      two_level.set_flag(e, stamp);
      two_level.update_entry(e, key);
    }
  };

  std::vector<std::uint32_t> scratch;
  while (ev.strategy().size() < cap) {
    std::uint32_t e;
    double key;
    std::uint32_t pair;
    if (opt.flat_heap) {
      if (flat.empty()) break;
      e = flat.top();
      key = flat.top_key();
      pair = cand.entries[e].pair;
    } else {
      if (two_level.empty()) break;
      const auto root = two_level.root();
      e = root.entry;
      pair = root.pair;
      key = root.key;
    }
    const Triple z = cand.entries[e].z;

    if (state.capacity_blocked(inst, pair, z.item)) {
      if (opt.flat_heap)
        flat.erase(e);
      else
        two_level.remove_pair(pair);
      continue;
    }
    if (state.slot_full(inst, z.user, z.time)) {
      if (opt.flat_heap)
        flat.erase(e);
      else
        two_level.remove_entry(e);
      continue;
    }

    const std::uint32_t group = cand.group_of_pair[pair];
    const std::uint32_t stamp = state.group_count[group];
    const std::uint32_t flag = opt.flat_heap ? flat_flags[e] : two_level.flag(e);
    if (flag != stamp) {
      // re-key every stale triple of this pair
      if (opt.flat_heap) {
        for (std::uint32_t e2 : pair_entries[pair])
          if (flat.contains(e2) && flat_flags[e2] != stamp) refresh_entry(e2, stamp);
      } else {
        scratch.assign(two_level.pair_entries(pair).begin(),
                       two_level.pair_entries(pair).end());
        for (std::uint32_t e2 : scratch)
          if (two_level.flag(e2) != stamp) refresh_entry(e2, stamp);
      }
      continue;
    }

    if (key <= 0.0) break;  // fresh non-positive root: nothing left worth taking

    ev.commit(z);
    state.on_commit(pair, group, z);
    if (opt.flat_heap)
      flat.erase(e);
    else
      two_level.remove_entry(e);
    if (opt.eager) {
      const std::uint32_t fresh = state.group_count[group];
      for (std::uint32_t e2 : group_entries[group])
        if (entry_live(e2)) refresh_entry(e2, fresh);
    }
  }
}

void run_time_round(RevenueEvaluator& ev, TimeStep t, Counters& counters) {
  const Instance& inst = ev.instance();
  const Candidates cand = Candidates::build(inst, t, t);
  const std::uint32_t n = static_cast<std::uint32_t>(cand.entries.size());
  if (n == 0) return;
  const std::uint64_t cap = selection_cap(inst);

  IndexedMaxHeap heap(n);
  std::vector<std::uint32_t> flags(n, 0);
  for (std::uint32_t e = 0; e < n; ++e) {
    const Triple& z = cand.entries[e].z;
    if (ev.strategy().contains(z)) continue;
    heap.push(e, ev.marginal_revenue(z));
    counters.recomputations++;
    flags[e] = class_stamp(ev, z.user, inst.item_class(z.item));
  }

  while (!heap.empty() && ev.strategy().size() < cap) {
    const std::uint32_t e = heap.top();
    const double key = heap.top_key();
    const Triple z = cand.entries[e].z;
    if (capacity_blocked(ev, inst, z.user, z.item) || slot_full(ev, inst, z.user, z.time)) {
      heap.pop();
      continue;
    }
    const std::uint32_t stamp = class_stamp(ev, z.user, inst.item_class(z.item));
    if (flags[e] != stamp) {
      heap.update(e, ev.marginal_revenue(z));
      counters.recomputations++;
      flags[e] = stamp;
      continue;
    }
    if (key <= 0.0) break;
    ev.commit(z);
    heap.pop();
  }
}

SolveReport finish_report(std::string algorithm, const RevenueEvaluator& ev,
                          const Counters& counters, Clock::time_point start) {
  SolveReport report;
  report.runtime_ms = elapsed_ms(start);  // solve time; report assembly below excluded
  report.algorithm = std::move(algorithm);
  report.expected_revenue = ev.total_revenue();
  report.strategy = ev.strategy();
  report.selections = report.strategy.size();
  report.recomputations = counters.recomputations;
  report.repeat_histogram = compute_repeat_histogram(report.strategy);
  return report;
}

std::uint64_t factorial_capped(std::uint64_t n) {
  std::uint64_t f = 1;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (f > std::numeric_limits<std::uint64_t>::max() / i)
      return std::numeric_limits<std::uint64_t>::max();
    f *= i;
  }
  return f;
}

}  // namespace

SolveReport g_greedy(const Instance& inst, const GreedyOptions& options) {
  const auto start = Clock::now();
  RevenueEvaluator ev(inst);
  Counters counters;
  run_global_window(ev, 1, inst.horizon(), options, counters);
  return finish_report("gg", ev, counters, start);
}

SolveReport sl_greedy(const Instance& inst) {
  const auto start = Clock::now();
  RevenueEvaluator ev(inst);
  Counters counters;
  for (TimeStep t = 1; t <= inst.horizon(); ++t) run_time_round(ev, t, counters);
  SolveReport report = finish_report("slg", ev, counters, start);
  return report;
}

SolveReport solve_with_permutations(const Instance& inst,
                                    const std::vector<std::vector<TimeStep>>& perms) {
  if (perms.empty()) throw std::invalid_argument("solve_with_permutations: no permutations");
  const auto start = Clock::now();
  bool have_best = false;
  RevenueEvaluator best(inst);
  Counters best_counters;
  std::uint64_t total_recomputations = 0;
  for (const auto& perm : perms) {
    RevenueEvaluator ev(inst);
    Counters counters;
    for (TimeStep t : perm) run_time_round(ev, t, counters);
    total_recomputations += counters.recomputations;
    if (!have_best || ev.total_revenue() > best.total_revenue()) {
      best = std::move(ev);
      have_best = true;
    }
  }
  best_counters.recomputations = total_recomputations;
  return finish_report("rlg", best, best_counters, start);
}

std::vector<std::vector<TimeStep>> sample_permutations(const std::vector<TimeStep>& times,
                                                       std::uint32_t n,
                                                       std::uint64_t seed) {
  const std::uint64_t total = factorial_capped(times.size());
  if (n < 1 || n > total)
    throw std::invalid_argument("requested " + std::to_string(n) +
                                " distinct permutations but only " + std::to_string(total) +
                                " exist");
  Rng rng(seed);
  std::vector<std::vector<TimeStep>> perms;
  if (times.size() <= 8 && 2ULL * n >= total) {
    // dense request: enumerate everything and shuffle
    std::vector<TimeStep> sorted = times;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::vector<TimeStep>> all;
    do {
      all.push_back(sorted);
    } while (std::next_permutation(sorted.begin(), sorted.end()));
    rng.shuffle(all);
    perms.assign(all.begin(), all.begin() + n);
  } else {
    std::set<std::vector<TimeStep>> seen;
    while (perms.size() < n) {
      std::vector<TimeStep> p = times;
      rng.shuffle(p);
      if (seen.insert(p).second) perms.push_back(std::move(p));
    }
  }
  return perms;
}

SolveReport rl_greedy(const Instance& inst, std::uint32_t n_perms, std::uint64_t seed) {
  std::vector<TimeStep> times(inst.horizon());
  for (TimeStep t = 1; t <= inst.horizon(); ++t) times[t - 1] = t;
  SolveReport report = solve_with_permutations(inst, sample_permutations(times, n_perms, seed));
  return report;
}

SolveReport staged_solve(const Instance& inst, const std::vector<TimeStep>& cutoffs,
                         InnerSolver inner, std::uint32_t n_perms, std::uint64_t seed) {
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (cutoffs[i] < 1 || cutoffs[i] >= inst.horizon())
      throw std::invalid_argument("staged_solve: cutoff out of [1,T-1]");
    if (i > 0 && cutoffs[i] <= cutoffs[i - 1])
      throw std::invalid_argument("staged_solve: cutoffs must be strictly increasing");
  }

  const auto start = Clock::now();
  RevenueEvaluator ev(inst);
  Counters counters;
  TimeStep lo = 1;
  std::size_t window_index = 0;
  auto run_window = [&](TimeStep a, TimeStep b) {
    switch (inner) {
      case InnerSolver::global:
        run_global_window(ev, a, b, GreedyOptions{}, counters);
        break;
      case InnerSolver::sequential:
        for (TimeStep t = a; t <= b; ++t) run_time_round(ev, t, counters);
        break;
      case InnerSolver::randomized: {
        std::vector<TimeStep> times;
        for (TimeStep t = a; t <= b; ++t) times.push_back(t);
        const auto perms =
            sample_permutations(times, n_perms, derive_seed(seed, window_index));
        bool have_best = false;
        RevenueEvaluator best(inst);
        for (const auto& perm : perms) {
          RevenueEvaluator pass_ev = ev;  // window passes restart from the same base
          Counters pass_counters;
          for (TimeStep t : perm) run_time_round(pass_ev, t, pass_counters);
          counters.recomputations += pass_counters.recomputations;
          if (!have_best || pass_ev.total_revenue() > best.total_revenue()) {
            best = std::move(pass_ev);
            have_best = true;
          }
        }
        ev = std::move(best);
        break;
      }
    }
    window_index++;
  };

  for (TimeStep cut : cutoffs) {
    run_window(lo, cut);
    lo = cut + 1;
  }
  run_window(lo, inst.horizon());

  SolveReport report = finish_report("staged", ev, counters, start);
  return report;
}

}  // namespace revmax
