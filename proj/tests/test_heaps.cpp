#include "doctest.h"
#include "revmax/heaps.hpp"
#include "revmax/rng.hpp"

using namespace revmax;

TEST_CASE("indexed heap orders by key then id") {
  IndexedMaxHeap heap(5);
  heap.push(3, 1.0);
  heap.push(1, 2.0);
  heap.push(2, 2.0);
  heap.push(0, 0.5);
  CHECK(heap.top() == 1);  // key tie between 1 and 2 goes to the smaller id
  heap.pop();
  CHECK(heap.top() == 2);
  heap.update(3, 9.0);
  CHECK(heap.top() == 3);
  heap.erase(3);
  CHECK(heap.top() == 2);
  heap.pop();
  CHECK(heap.top() == 0);
  heap.pop();
  CHECK(heap.empty());
}

TEST_CASE("indexed heap random workout against a reference scan") {
  Rng rng(11);
  const std::uint32_t n = 64;
  IndexedMaxHeap heap(n);
  std::vector<double> keys(n);
  std::vector<bool> live(n, false);
  for (int step = 0; step < 2000; ++step) {
    const std::uint32_t id = static_cast<std::uint32_t>(rng.below(n));
    const double key = rng.uniform(0.0, 4.0);
    if (!live[id]) {
      heap.push(id, key);
      keys[id] = key;
      live[id] = true;
    } else if (rng.uniform01() < 0.5) {
      heap.update(id, key);
      keys[id] = key;
    } else {
      heap.erase(id);
      live[id] = false;
    }
    if (heap.empty()) continue;
    std::uint32_t expect = n;
    for (std::uint32_t j = 0; j < n; ++j)
      if (live[j] && (expect == n || keys[j] > keys[expect] ||
                      (keys[j] == keys[expect] && j < expect)))
        expect = j;
    CHECK(heap.top() == expect);
  }
}

TEST_CASE("two-level heap keeps one upper slot per pair keyed by the lower root") {
  // 3 pairs x up-to-3 entries; entry e belongs to pair e/3
  TwoLevelHeap heap(9, 3);
  const double keys[9] = {0.3, 0.9, 0.1, 0.5, 0.5, 0.2, 0.7, 0.4, 0.6};
  for (std::uint32_t e = 0; e < 9; ++e) heap.stage(e, e / 3, keys[e]);
  heap.finish_build();
  CHECK(heap.invariants_hold(3));
  CHECK(heap.root().entry == 1);  // 0.9 in pair 0

  heap.remove_entry(1);
  CHECK(heap.invariants_hold(3));
  CHECK(heap.root().entry == 6);  // 0.7 in pair 2

  heap.update_entry(5, 1.5);
  CHECK(heap.invariants_hold(3));
  CHECK(heap.root().entry == 5);
  CHECK(heap.root().pair == 1);

  heap.remove_pair(1);
  CHECK(heap.invariants_hold(3));
  CHECK(!heap.pair_live(1));
  CHECK(heap.live_pairs() == 2);
  CHECK(heap.root().entry == 6);

  // drain pair 2; its upper slot must disappear with the last entry
  heap.remove_entry(6);
  heap.remove_entry(8);
  heap.remove_entry(7);
  CHECK(!heap.pair_live(2));
  CHECK(heap.invariants_hold(3));
  CHECK(heap.root().entry == 0);  // 0.3 beats 0.1 in pair 0
}

TEST_CASE("two-level ties resolve toward the smaller entry id") {
  TwoLevelHeap heap(4, 2);
  heap.stage(0, 0, 1.0);
  heap.stage(1, 0, 1.0);
  heap.stage(2, 1, 1.0);
  heap.stage(3, 1, 1.0);
  heap.finish_build();
  CHECK(heap.root().entry == 0);
  heap.remove_entry(0);
  CHECK(heap.root().entry == 1);
  heap.remove_entry(1);
  CHECK(heap.root().entry == 2);
}
