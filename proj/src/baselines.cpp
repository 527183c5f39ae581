#include "revmax/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

#include "revmax/greedy.hpp"
#include "revmax/revenue.hpp"

namespace revmax {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

SolveReport report_for(std::string algorithm, const Instance& inst, Strategy strategy,
                       Clock::time_point start) {
  SolveReport report;
  report.algorithm = std::move(algorithm);
  report.expected_revenue = revenue(inst, strategy);
  report.strategy = std::move(strategy);
  report.selections = report.strategy.size();
  report.repeat_histogram = compute_repeat_histogram(report.strategy);
  report.runtime_ms = elapsed_ms(start);
  return report;
}

// shared by TopRA / TopRE: per user take the k best-scored items, skipping
// items whose capacity is already used up, and repeat them at all time steps
Strategy assign_top_items(const Instance& inst,
                          const std::vector<std::vector<std::pair<double, ItemId>>>& scored) {
  Strategy s(inst);
  std::vector<std::uint32_t> item_load(inst.items().size(), 0);
  for (UserId u = 0; u < inst.num_users(); ++u) {
    std::uint32_t taken = 0;
    for (const auto& [score, item] : scored[u]) {
      if (taken == inst.display_k()) break;
      if (item_load[item] >= inst.item(item).capacity) continue;
      item_load[item]++;
      taken++;
      for (TimeStep t = 1; t <= inst.horizon(); ++t) s.insert({u, item, t});
    }
  }
  return s;
}

// descending score, ascending item id on ties
void sort_scored(std::vector<std::pair<double, ItemId>>& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });
}

}  // namespace

RatingMap load_ratings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("parse error: cannot open " + path);
  RatingMap ratings;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::uint64_t user, item;
    double rating;
    if (!(ss >> user >> item >> rating))
      throw ParseError("parse error: bad ratings line " + std::to_string(lineno));
    ratings[rating_key(static_cast<UserId>(user), static_cast<ItemId>(item))] = rating;
  }
  return ratings;
}

SolveReport top_ra(const Instance& inst, const RatingMap& ratings) {
  const auto start = Clock::now();
  std::vector<std::vector<std::pair<double, ItemId>>> scored(inst.num_users());
  for (const auto& [key, rating] : ratings) {
    if (rating <= 0.0) continue;
    const UserId u = static_cast<UserId>(key >> 32);
    const ItemId i = static_cast<ItemId>(key & 0xffffffffu);
    if (u < inst.num_users() && i < inst.items().size()) scored[u].push_back({rating, i});
  }
  for (auto& v : scored) sort_scored(v);
  return report_for("topra", inst, assign_top_items(inst, scored), start);
}

SolveReport top_re(const Instance& inst) {
  const auto start = Clock::now();
  std::vector<std::vector<std::pair<double, ItemId>>> scored(inst.num_users());
  for (const Instance::Pair& p : inst.pairs()) {
    double sum = 0.0;
    for (std::uint32_t e = p.begin; e < p.end; ++e) {
      const AdoptionEntry& a = inst.entries()[e];
      sum += inst.price(a.item, a.time) * a.prob;
    }
    const double score = sum / inst.horizon();
    if (score > 0.0) scored[p.user].push_back({score, p.item});
  }
  for (auto& v : scored) sort_scored(v);
  return report_for("topre", inst, assign_top_items(inst, scored), start);
}

SolveReport global_no(const Instance& inst) {
  const auto start = Clock::now();
  const Instance unsaturated = inst.with_uniform_beta(1.0);
  SolveReport inner = g_greedy(unsaturated);
  std::vector<Triple> triples(inner.strategy.triples().begin(),
                              inner.strategy.triples().end());
  SolveReport report =
      report_for("ggno", inst, Strategy::from_triples(inst, triples), start);
  report.recomputations = inner.recomputations;
  return report;
}

SolveReport brute_force_opt(const Instance& inst, std::uint32_t limit) {
  const auto start = Clock::now();
  const auto& entries = inst.entries();
  if (entries.size() > limit)
    throw std::invalid_argument("brute_force_opt: " + std::to_string(entries.size()) +
                                " positive triples exceed limit " + std::to_string(limit));
  const std::uint32_t n = static_cast<std::uint32_t>(entries.size());

  double best_rev = 0.0;
  std::uint64_t best_mask = 0;  // empty set is always valid
  for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
    std::map<std::pair<UserId, TimeStep>, std::uint32_t> slots;
    std::map<ItemId, std::set<UserId>> takers;
    bool valid = true;
    for (std::uint32_t e = 0; e < n && valid; ++e) {
      if (!(mask & (1ULL << e))) continue;
      const AdoptionEntry& a = entries[e];
      if (++slots[{a.user, a.time}] > inst.display_k()) valid = false;
      takers[a.item].insert(a.user);
      if (takers[a.item].size() > inst.item(a.item).capacity) valid = false;
    }
    if (!valid) continue;
    Strategy s(inst);
    for (std::uint32_t e = 0; e < n; ++e)
      if (mask & (1ULL << e)) s.insert({entries[e].user, entries[e].item, entries[e].time});
    const double rev = revenue(inst, s);
    if (rev > best_rev) {
      best_rev = rev;
      best_mask = mask;
    }
  }

  Strategy best(inst);
  for (std::uint32_t e = 0; e < n; ++e)
    if (best_mask & (1ULL << e))
      best.insert({entries[e].user, entries[e].item, entries[e].time});
  return report_for("bf", inst, std::move(best), start);
}

// ---------------------------------------------------------------------------
// min-cost flow

FlowNetwork::FlowNetwork(std::uint32_t num_nodes) : adj_(num_nodes) {}

std::uint32_t FlowNetwork::add_arc(std::uint32_t from, std::uint32_t to,
                                   std::int64_t capacity, double cost) {
  const std::uint32_t id = static_cast<std::uint32_t>(arcs_.size());
  arcs_.push_back({to, capacity, cost});
  arcs_.push_back({from, 0, -cost});  // residual
  initial_cap_.push_back(capacity);
  initial_cap_.push_back(0);
  adj_[from].push_back(id);
  adj_[to].push_back(id + 1);
  return id;
}

void FlowNetwork::augment_while_profitable(std::uint32_t source, std::uint32_t sink) {
  const double inf = std::numeric_limits<double>::infinity();
  const std::uint32_t n = static_cast<std::uint32_t>(adj_.size());
  std::vector<double> pot(n, 0.0);

  // Bellman-Ford once to absorb the negative arc costs into potentials
  for (std::uint32_t round = 0; round + 1 < n; ++round) {
    bool changed = false;
    for (std::uint32_t a = 0; a < arcs_.size(); ++a) {
      const std::uint32_t from = arcs_[a ^ 1].to;
      if (arcs_[a].cap > 0 && pot[from] + arcs_[a].cost < pot[arcs_[a].to]) {
        pot[arcs_[a].to] = pot[from] + arcs_[a].cost;
        changed = true;
      }
    }
    if (!changed) break;
  }

  std::vector<double> dist(n);
  std::vector<std::uint32_t> parent_arc(n);
  while (true) {
    std::fill(dist.begin(), dist.end(), inf);
    dist[source] = 0.0;
    using Q = std::pair<double, std::uint32_t>;
    std::priority_queue<Q, std::vector<Q>, std::greater<Q>> queue;
    queue.push({0.0, source});
    while (!queue.empty()) {
      auto [d, v] = queue.top();
      queue.pop();
      if (d > dist[v]) continue;
      for (std::uint32_t a : adj_[v]) {
        if (arcs_[a].cap <= 0) continue;
        const double nd = d + arcs_[a].cost + pot[v] - pot[arcs_[a].to];
        if (nd < dist[arcs_[a].to]) {
          dist[arcs_[a].to] = nd;
          parent_arc[arcs_[a].to] = a;
          queue.push({nd, arcs_[a].to});
        }
      }
    }
    if (dist[sink] == inf) break;
    const double path_cost = dist[sink] + pot[sink] - pot[source];
    if (path_cost >= -1e-12) break;  // no revenue left to gain

    std::int64_t bottleneck = std::numeric_limits<std::int64_t>::max();
    for (std::uint32_t v = sink; v != source;) {
      const std::uint32_t a = parent_arc[v];
      bottleneck = std::min(bottleneck, arcs_[a].cap);
      v = arcs_[a ^ 1].to;
    }
    for (std::uint32_t v = sink; v != source;) {
      const std::uint32_t a = parent_arc[v];
      arcs_[a].cap -= bottleneck;
      arcs_[a ^ 1].cap += bottleneck;
      v = arcs_[a ^ 1].to;
    }
    total_cost_ += path_cost * static_cast<double>(bottleneck);
    for (std::uint32_t v = 0; v < n; ++v)
      if (dist[v] != inf) pot[v] += dist[v];
  }
}

std::int64_t FlowNetwork::flow_on(std::uint32_t arc_id) const {
  return initial_cap_[arc_id] - arcs_[arc_id].cap;
}

SolveReport dcs_optimal_t1(const Instance& inst) {
  const auto start = Clock::now();
  if (inst.horizon() != 1)
    throw std::invalid_argument("dcs_optimal_t1: requires T = 1, got T = " +
                                std::to_string(inst.horizon()));
  std::map<ClassId, std::uint32_t> class_sizes;
  for (const ItemSpec& it : inst.items()) class_sizes[it.class_id]++;
  for (const auto& [c, size] : class_sizes)
    if (size > 1)
      throw std::invalid_argument(
          "dcs_optimal_t1: class " + std::to_string(c) + " has " + std::to_string(size) +
          " items; same-time competition breaks the matching reduction");

  const std::uint32_t num_users = inst.num_users();
  const std::uint32_t num_items = static_cast<std::uint32_t>(inst.items().size());
  const std::uint32_t source = 0;
  const std::uint32_t sink = 1 + num_users + num_items;
  FlowNetwork net(sink + 1);

  for (UserId u = 0; u < num_users; ++u)
    net.add_arc(source, 1 + u, inst.display_k(), 0.0);
  for (ItemId i = 0; i < num_items; ++i)
    net.add_arc(1 + num_users + i, sink, inst.item(i).capacity, 0.0);

  std::vector<std::pair<std::uint32_t, Triple>> edge_arcs;
  for (const Instance::Pair& p : inst.pairs()) {
    const double prob = inst.entries()[p.begin].prob;  // single time step
    const double weight = inst.price(p.item, 1) * prob;
    const std::uint32_t arc =
        net.add_arc(1 + p.user, 1 + num_users + p.item, 1, -weight);
    edge_arcs.push_back({arc, Triple{p.user, p.item, 1}});
  }

  net.augment_while_profitable(source, sink);

  Strategy s(inst);
  for (const auto& [arc, z] : edge_arcs)
    if (net.flow_on(arc) > 0) s.insert(z);
  return report_for("dcs", inst, std::move(s), start);
}

}  // namespace revmax
