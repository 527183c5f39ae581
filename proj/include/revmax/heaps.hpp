#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace revmax {

/// Addressable binary max-heap over dense ids. Supports update-key and erase
/// through a position table instead of lazy duplicate entries, so it holds at
/// most one live slot per id. Ties are broken toward the smaller id, which
/// keeps extraction order deterministic.
class IndexedMaxHeap {
 public:
  explicit IndexedMaxHeap(std::uint32_t num_ids)
      : key_(num_ids, 0.0), pos_(num_ids, kAbsent) {}

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  bool contains(std::uint32_t id) const { return pos_[id] != kAbsent; }
  double key(std::uint32_t id) const { return key_[id]; }

  std::uint32_t top() const { return heap_.front(); }
  double top_key() const { return key_[heap_.front()]; }

  void push(std::uint32_t id, double key) {
    key_[id] = key;
    pos_[id] = static_cast<std::uint32_t>(heap_.size());
    heap_.push_back(id);
    sift_up(pos_[id]);
  }

  void update(std::uint32_t id, double key) {
    key_[id] = key;
    const std::uint32_t p = pos_[id];
    if (!sift_up(p)) sift_down(p);
  }

  void erase(std::uint32_t id) {
    const std::uint32_t p = pos_[id];
    const std::uint32_t last = heap_.back();
    heap_.pop_back();
    pos_[id] = kAbsent;
    if (last == id) return;
    heap_[p] = last;
    pos_[last] = p;
    if (!sift_up(p)) sift_down(p);
  }

  void pop() { erase(heap_.front()); }

 private:
  static constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();

  bool better(std::uint32_t a, std::uint32_t b) const {
    return key_[a] > key_[b] || (key_[a] == key_[b] && a < b);
  }

  bool sift_up(std::uint32_t p) {
    bool moved = false;
    while (p > 0) {
      const std::uint32_t parent = (p - 1) / 2;
      if (!better(heap_[p], heap_[parent])) break;
      swap_at(p, parent);
      p = parent;
      moved = true;
    }
    return moved;
  }

  void sift_down(std::uint32_t p) {
    const std::uint32_t n = static_cast<std::uint32_t>(heap_.size());
    while (true) {
      std::uint32_t best = p;
      const std::uint32_t l = 2 * p + 1, r = 2 * p + 2;
      if (l < n && better(heap_[l], heap_[best])) best = l;
      if (r < n && better(heap_[r], heap_[best])) best = r;
      if (best == p) break;
      swap_at(p, best);
      p = best;
    }
  }

  void swap_at(std::uint32_t a, std::uint32_t b) {
    std::swap(heap_[a], heap_[b]);
    pos_[heap_[a]] = a;
    pos_[heap_[b]] = b;
  }

  std::vector<double> key_;
  std::vector<std::uint32_t> pos_;
  std::vector<std::uint32_t> heap_;
};

/// Two-level priority structure for global greedy selection. Each (user,item)
/// pair keeps a small lower max-heap over its time-step entries (at most T of
/// them); the roots of all lower heaps feed one upper indexed max-heap keyed
/// by the root value. Per-entry staleness stamps drive lazy forward: a stamp
/// records the size of the committed same-(user,class) set at the moment the
/// entry's key was computed.
///
/// Entry ids and pair ids are expected in lexicographic (user,item,time) /
/// (user,item) order; both levels break key ties toward the smaller id, so
/// overall extraction follows the deterministic triple order. Lower heaps
/// live in one flat slot array indexed per pair.
class TwoLevelHeap {
 public:
  TwoLevelHeap(std::uint32_t num_entries, std::uint32_t num_pairs)
      : key_(num_entries, 0.0),
        flag_(num_entries, 0),
        entry_pair_(num_entries, 0),
        entry_pos_(num_entries, kAbsent),
        begin_(num_pairs + 1, 0),
        live_(num_pairs, 0),
        upper_(num_pairs) {
    staged_.reserve(num_entries);
  }

  // build phase: insert all entries, then heapify
  void stage(std::uint32_t entry, std::uint32_t pair, double key) {
    key_[entry] = key;
    entry_pair_[entry] = pair;
    staged_.push_back(entry);
    begin_[pair + 1]++;
  }

  void finish_build() {
    const std::uint32_t num_pairs = static_cast<std::uint32_t>(live_.size());
    for (std::uint32_t p = 0; p < num_pairs; ++p) begin_[p + 1] += begin_[p];
    slots_.resize(staged_.size());
    std::vector<std::uint32_t> fill(num_pairs, 0);
    for (std::uint32_t e : staged_) {
      const std::uint32_t p = entry_pair_[e];
      slots_[begin_[p] + fill[p]++] = e;
    }
    staged_.clear();
    staged_.shrink_to_fit();
    for (std::uint32_t p = 0; p < num_pairs; ++p) {
      live_[p] = fill[p];
      if (live_[p] == 0) continue;
      for (std::uint32_t i = 1; i < live_[p]; ++i) build_sift_up(p, i);
      for (std::uint32_t i = 0; i < live_[p]; ++i) entry_pos_[slot(p, i)] = i;
      upper_.push(p, key_[slot(p, 0)]);
    }
  }

  bool empty() const { return upper_.empty(); }
  std::size_t live_pairs() const { return upper_.size(); }

  struct Root {
    std::uint32_t entry;
    std::uint32_t pair;
    double key;
  };
  Root root() const {
    const std::uint32_t p = upper_.top();
    const std::uint32_t e = slot(p, 0);
    return {e, p, key_[e]};
  }

  double entry_key(std::uint32_t entry) const { return key_[entry]; }
  std::uint32_t flag(std::uint32_t entry) const { return flag_[entry]; }
  void set_flag(std::uint32_t entry, std::uint32_t stamp) { flag_[entry] = stamp; }

  std::span<const std::uint32_t> pair_entries(std::uint32_t pair) const {
    return {slots_.data() + begin_[pair], live_[pair]};
  }

  void update_entry(std::uint32_t entry, double key) {
    key_[entry] = key;
    const std::uint32_t p = entry_pair_[entry];
    if (!sift_up(p, entry_pos_[entry])) sift_down(p, entry_pos_[entry]);
    refresh_upper(p);
  }

  void remove_entry(std::uint32_t entry) {
    const std::uint32_t p = entry_pair_[entry];
    const std::uint32_t pos = entry_pos_[entry];
    const std::uint32_t last = slot(p, live_[p] - 1);
    live_[p]--;
    entry_pos_[entry] = kAbsent;
    if (last != entry) {
      slots_[begin_[p] + pos] = last;
      entry_pos_[last] = pos;
      if (!sift_up(p, pos)) sift_down(p, pos);
    }
    if (live_[p] == 0)
      upper_.erase(p);
    else
      refresh_upper(p);
  }

  void remove_pair(std::uint32_t pair) {
    for (std::uint32_t i = 0; i < live_[pair]; ++i) entry_pos_[slot(pair, i)] = kAbsent;
    live_[pair] = 0;
    upper_.erase(pair);
  }

  bool entry_live(std::uint32_t entry) const { return entry_pos_[entry] != kAbsent; }
  bool pair_live(std::uint32_t pair) const { return upper_.contains(pair); }

  // invariant check used by tests: one upper slot per non-empty lower heap,
  // keyed exactly by its root, and lower heaps respect the heap order
  bool invariants_hold(std::uint32_t max_lower_size) const {
    for (std::uint32_t p = 0; p < live_.size(); ++p) {
      if (live_[p] == 0) {
        if (upper_.contains(p)) return false;
        continue;
      }
      if (live_[p] > max_lower_size) return false;
      if (!upper_.contains(p) || upper_.key(p) != key_[slot(p, 0)]) return false;
      for (std::uint32_t i = 1; i < live_[p]; ++i)
        if (entry_better(slot(p, i), slot(p, (i - 1) / 2))) return false;
    }
    return true;
  }

 private:
  static constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();

  std::uint32_t slot(std::uint32_t pair, std::uint32_t i) const {
    return slots_[begin_[pair] + i];
  }

  bool entry_better(std::uint32_t a, std::uint32_t b) const {
    return key_[a] > key_[b] || (key_[a] == key_[b] && a < b);
  }

  void refresh_upper(std::uint32_t pair) { upper_.update(pair, key_[slot(pair, 0)]); }

  // build-time sift that does not maintain entry positions yet
  void build_sift_up(std::uint32_t pair, std::uint32_t i) {
    while (i > 0) {
      const std::uint32_t parent = (i - 1) / 2;
      if (!entry_better(slot(pair, i), slot(pair, parent))) break;
      std::swap(slots_[begin_[pair] + i], slots_[begin_[pair] + parent]);
      i = parent;
    }
  }

  bool sift_up(std::uint32_t pair, std::uint32_t pos) {
    std::uint32_t i = pos;
    bool moved = false;
    while (i > 0) {
      const std::uint32_t parent = (i - 1) / 2;
      if (!entry_better(slot(pair, i), slot(pair, parent))) break;
      std::swap(slots_[begin_[pair] + i], slots_[begin_[pair] + parent]);
      entry_pos_[slot(pair, i)] = i;
      entry_pos_[slot(pair, parent)] = parent;
      i = parent;
      moved = true;
    }
    return moved;
  }

  void sift_down(std::uint32_t pair, std::uint32_t pos) {
    std::uint32_t i = pos;
    while (true) {
      std::uint32_t best = i;
      const std::uint32_t l = 2 * i + 1, r = 2 * i + 2;
      if (l < live_[pair] && entry_better(slot(pair, l), slot(pair, best))) best = l;
      if (r < live_[pair] && entry_better(slot(pair, r), slot(pair, best))) best = r;
      if (best == i) break;
      std::swap(slots_[begin_[pair] + i], slots_[begin_[pair] + best]);
      entry_pos_[slot(pair, i)] = i;
      entry_pos_[slot(pair, best)] = best;
      i = best;
    }
  }

  std::vector<double> key_;
  std::vector<std::uint32_t> flag_;
  std::vector<std::uint32_t> entry_pair_;
  std::vector<std::uint32_t> entry_pos_;
  std::vector<std::uint32_t> staged_;
  std::vector<std::uint32_t> slots_;   // lower heaps, one contiguous segment per pair
  std::vector<std::uint32_t> begin_;   // segment offsets, size num_pairs + 1
  std::vector<std::uint32_t> live_;    // live entries per segment
  IndexedMaxHeap upper_;
};

}  // namespace revmax
