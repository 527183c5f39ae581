#include <cstdio>
#include <fstream>
#include <set>

#include "doctest.h"
#include "revmax/baselines.hpp"
#include "revmax/greedy.hpp"
#include "revmax/revenue.hpp"
#include "revmax/rng.hpp"
#include "support/fixtures.hpp"

using namespace revmax;

namespace {

RatingMap uniform_ratings(const Instance& inst, double value = 3.0) {
  RatingMap ratings;
  for (const Instance::Pair& p : inst.pairs()) ratings[rating_key(p.user, p.item)] = value;
  return ratings;
}

}  // namespace

TEST_CASE("top_ra repeats each user's top-rated items at every step") {
  std::vector<ItemSpec> items{{0, 0, 5, 1.0, {1.0, 1.0}}, {1, 1, 5, 1.0, {1.0, 1.0}}};
  const Instance inst = Instance::from_parts(
      1, 2, 2, std::move(items),
      {{0, 0, 1, 0.5}, {0, 0, 2, 0.5}, {0, 1, 1, 0.5}, {0, 1, 2, 0.5}});
  RatingMap ratings;
  ratings[rating_key(0, 0)] = 4.0;
  ratings[rating_key(0, 1)] = 3.0;
  const SolveReport report = top_ra(inst, ratings);
  CHECK(report.strategy.triples() ==
        std::set<Triple>{{0, 0, 1}, {0, 0, 2}, {0, 1, 1}, {0, 1, 2}});
  CHECK(validate_strategy(inst, report.strategy).valid());
}

TEST_CASE("top_ra on the worked instance must repeat the only item") {
  const Instance inst = fixtures::example2_instance();
  const SolveReport report = top_ra(inst, uniform_ratings(inst));
  CHECK(report.strategy.triples() == std::set<Triple>{{0, 0, 1}, {0, 0, 2}});
  CHECK(report.expected_revenue == doctest::Approx(0.5285).epsilon(1e-9));
}

TEST_CASE("top_ra skips capacity-exhausted items for later users") {
  std::vector<ItemSpec> items{{0, 0, 1, 1.0, {1.0}}, {1, 1, 5, 1.0, {1.0}}};
  const Instance inst =
      Instance::from_parts(2, 1, 1, std::move(items),
                           {{0, 0, 1, 0.9}, {0, 1, 1, 0.5}, {1, 0, 1, 0.9}, {1, 1, 1, 0.5}});
  RatingMap ratings;
  ratings[rating_key(0, 0)] = 5.0;
  ratings[rating_key(0, 1)] = 4.0;
  ratings[rating_key(1, 0)] = 5.0;
  ratings[rating_key(1, 1)] = 4.0;
  const SolveReport report = top_ra(inst, ratings);
  // user 0 takes item 0 (q=1 now spent); user 1 falls through to item 1
  CHECK(report.strategy.triples() == std::set<Triple>{{0, 0, 1}, {1, 1, 1}});
  CHECK(validate_strategy(inst, report.strategy).valid());
}

TEST_CASE("top_re equals top_ra on a single-item instance") {
  const Instance inst = fixtures::example2_instance();
  CHECK(top_re(inst).strategy.triples() ==
        top_ra(inst, uniform_ratings(inst)).strategy.triples());
}

TEST_CASE("top_re breaks equal scores by item index") {
  // item 0: cheap/high-prob, item 1: expensive/low-prob, equal products
  std::vector<ItemSpec> items{{0, 0, 5, 1.0, {1.0}}, {1, 1, 5, 1.0, {2.0}}};
  const Instance inst = Instance::from_parts(1, 1, 1, std::move(items),
                                             {{0, 0, 1, 0.8}, {0, 1, 1, 0.4}});
  const SolveReport report = top_re(inst);
  CHECK(report.strategy.triples() == std::set<Triple>{{0, 0, 1}});
}

TEST_CASE("top_re ranks by horizon-averaged expected revenue") {
  std::vector<ItemSpec> items{{0, 0, 5, 1.0, {9.0, 1.0}}, {1, 1, 5, 1.0, {4.0, 4.0}}};
  const Instance inst = Instance::from_parts(
      1, 2, 1, std::move(items),
      {{0, 0, 1, 0.5}, {0, 0, 2, 0.5}, {0, 1, 1, 0.5}, {0, 1, 2, 0.5}});
  // item 0 scores (9+1)/2 * 0.5 = 2.5, item 1 scores 4 * 0.5 = 2.0
  CHECK(top_re(inst).strategy.triples() == std::set<Triple>{{0, 0, 1}, {0, 0, 2}});
}

TEST_CASE("global_no selects blind to saturation, reports true revenue") {
  const Instance inst = fixtures::example2_instance();
  const SolveReport report = global_no(inst);
  // without saturation both triples look positive, so both are taken
  CHECK(report.strategy.triples() == std::set<Triple>{{0, 0, 1}, {0, 0, 2}});
  CHECK(report.expected_revenue == doctest::Approx(0.5285).epsilon(1e-9));
  CHECK(report.expected_revenue <= g_greedy(inst).expected_revenue + 1e-12);
}

TEST_CASE("global_no is identical to g_greedy when saturation is already off") {
  Rng rng(61);
  for (int round = 0; round < 10; ++round) {
    fixtures::RandomSpec spec;
    spec.degenerate_beta = false;
    Instance inst = fixtures::random_instance(rng, spec).with_uniform_beta(1.0);
    const SolveReport gg = g_greedy(inst);
    const SolveReport no = global_no(inst);
    CHECK(gg.strategy.triples() == no.strategy.triples());
    CHECK(gg.expected_revenue == doctest::Approx(no.expected_revenue).epsilon(1e-12));
  }
}

TEST_CASE("global_no's selection ignores beta entirely") {
  Rng rng(62);
  const Instance a = fixtures::random_instance(rng);
  const Instance b = a.with_uniform_beta(0.05);
  CHECK(global_no(a).strategy.triples() == global_no(b).strategy.triples());
}

TEST_CASE("brute force finds the worked optimum") {
  const Instance inst = fixtures::example2_instance();
  const SolveReport report = brute_force_opt(inst);
  CHECK(report.expected_revenue == doctest::Approx(0.57).epsilon(1e-9));
  CHECK(report.strategy.triples() == std::set<Triple>{{0, 0, 2}});
}

TEST_CASE("brute force on an empty instance returns the empty strategy") {
  std::vector<ItemSpec> items{{0, 0, 1, 1.0, {1.0}}};
  const Instance inst = Instance::from_parts(1, 1, 1, std::move(items), {});
  const SolveReport report = brute_force_opt(inst);
  CHECK(report.expected_revenue == 0.0);
  CHECK(report.strategy.empty());
}

TEST_CASE("brute force refuses oversized instances") {
  Rng rng(1);
  fixtures::RandomSpec spec;
  spec.users = 4;
  spec.items = 4;
  spec.horizon = 2;
  spec.density = 1.0;
  const Instance inst = fixtures::random_instance(rng, spec);  // 32 triples
  CHECK_THROWS_AS(brute_force_opt(inst), std::invalid_argument);
}

TEST_CASE("brute force dominates every heuristic on tiny instances") {
  Rng rng(71);
  int rounds = 0;
  while (rounds < 40) {
    fixtures::RandomSpec spec;
    spec.density = 0.4;
    const Instance inst = fixtures::random_instance(rng, spec);
    if (inst.entries().empty() || inst.entries().size() > 12) continue;
    const double opt = brute_force_opt(inst).expected_revenue;
    CHECK(opt >= g_greedy(inst).expected_revenue - 1e-9);
    CHECK(opt >= sl_greedy(inst).expected_revenue - 1e-9);
    CHECK(opt >= rl_greedy(inst, 2, rounds).expected_revenue - 1e-9);
    CHECK(opt >= top_re(inst).expected_revenue - 1e-9);
    CHECK(opt >= top_ra(inst, uniform_ratings(inst)).expected_revenue - 1e-9);
    CHECK(opt >= global_no(inst).expected_revenue - 1e-9);
    ++rounds;
  }
}

TEST_CASE("dcs picks the single best edge under k = 1") {
  std::vector<ItemSpec> items{{0, 0, 5, 1.0, {2.0}}, {1, 1, 5, 1.0, {3.0}}};
  const Instance inst = Instance::from_parts(1, 1, 1, std::move(items),
                                             {{0, 0, 1, 0.9}, {0, 1, 1, 0.5}});
  const SolveReport report = dcs_optimal_t1(inst);
  CHECK(report.strategy.triples() == std::set<Triple>{{0, 0, 1}});  // 1.8 > 1.5
  CHECK(report.expected_revenue == doctest::Approx(1.8).epsilon(1e-12));
}

TEST_CASE("dcs with loose constraints selects every positive triple") {
  std::vector<ItemSpec> items{{0, 0, 5, 1.0, {2.0}}, {1, 1, 5, 1.0, {3.0}}};
  const Instance inst = Instance::from_parts(
      2, 1, 2, std::move(items),
      {{0, 0, 1, 0.9}, {0, 1, 1, 0.5}, {1, 0, 1, 0.2}, {1, 1, 1, 0.8}});
  CHECK(dcs_optimal_t1(inst).strategy.size() == 4);
}

TEST_CASE("dcs rejects multi-step horizons and multi-item classes") {
  CHECK_THROWS_AS(dcs_optimal_t1(fixtures::example2_instance()), std::invalid_argument);
  std::vector<ItemSpec> items{{0, 0, 5, 1.0, {1.0}}, {1, 0, 5, 1.0, {1.0}}};
  const Instance shared_class =
      Instance::from_parts(1, 1, 2, std::move(items), {{0, 0, 1, 0.5}, {0, 1, 1, 0.5}});
  CHECK_THROWS_AS(dcs_optimal_t1(shared_class), std::invalid_argument);
}

TEST_CASE("dcs equals enumeration on random singleton-class instances") {
  Rng rng(81);
  int rounds = 0;
  while (rounds < 40) {
    fixtures::RandomSpec spec;
    spec.users = 3;
    spec.items = 4;
    spec.classes = 4;  // round-robin below makes classes singleton
    spec.horizon = 1;
    spec.display_k = 1 + static_cast<std::uint32_t>(rng.below(3));
    spec.density = 0.7;
    Instance base = fixtures::random_instance(rng, spec);
    std::vector<ItemSpec> items = base.items();
    for (std::size_t i = 0; i < items.size(); ++i)
      items[i].class_id = static_cast<ClassId>(i);
    std::vector<AdoptionEntry> entries = base.entries();
    const Instance inst = Instance::from_parts(base.num_users(), 1, base.display_k(),
                                               std::move(items), std::move(entries));
    if (inst.entries().empty() || inst.entries().size() > 12) continue;
    const double opt = brute_force_opt(inst).expected_revenue;
    CHECK(dcs_optimal_t1(inst).expected_revenue == doctest::Approx(opt).epsilon(1e-9));
    ++rounds;
  }
}

TEST_CASE("ratings files parse and reject junk") {
  const std::string path = "/tmp/revmax_test_ratings.tsv";
  {
    std::ofstream out(path);
    out << "# user item rating\n0 0 4.5\n0 1 3\n";
  }
  const RatingMap ratings = load_ratings(path);
  CHECK(ratings.size() == 2);
  CHECK(ratings.at(rating_key(0, 0)) == doctest::Approx(4.5));
  {
    std::ofstream out(path);
    out << "0 zero 4.5\n";
  }
  CHECK_THROWS_AS(load_ratings(path), ParseError);
  std::remove(path.c_str());
}

TEST_CASE("for a fixed strategy, revenue never decreases as beta grows") {
  Rng rng(63);
  for (int round = 0; round < 60; ++round) {
    fixtures::RandomSpec spec;
    spec.degenerate_beta = false;
    const Instance base = fixtures::random_instance(rng, spec);
    if (base.entries().empty()) continue;
    std::set<Triple> triples;
    for (const Triple& z : fixtures::positive_triples(base))
      if (rng.uniform01() < 0.6) triples.insert(z);
    if (triples.empty()) continue;

    const ItemId bumped = static_cast<ItemId>(rng.below(base.items().size()));
    std::vector<ItemSpec> items = base.items();
    items[bumped].saturation =
        std::min(1.0, items[bumped].saturation + rng.uniform(0.0, 0.5));
    std::vector<AdoptionEntry> entries = base.entries();
    const Instance raised = Instance::from_parts(base.num_users(), base.horizon(),
                                                 base.display_k(), std::move(items),
                                                 std::move(entries));
    const std::vector<Triple> tv(triples.begin(), triples.end());
    const double before = revenue(base, Strategy::from_triples(base, tv));
    const double after = revenue(raised, Strategy::from_triples(raised, tv));
    CHECK(after >= before - 1e-12);
  }
}
