#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace revmax {

using UserId = std::uint32_t;
using ItemId = std::uint32_t;
using ClassId = std::uint32_t;
using TimeStep = std::uint32_t;  // 1-based, in [1, T]

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One recommendation: item shown to user at a time step.
/// Ordered lexicographically by (user, item, time); every tie anywhere in the
/// library is broken through this order so runs are reproducible.
struct Triple {
  UserId user = 0;
  ItemId item = 0;
  TimeStep time = 1;
  auto operator<=>(const Triple&) const = default;
};

struct ItemSpec {
  ItemId item_id = 0;
  ClassId class_id = 0;
  std::uint32_t capacity = 0;        // q_i, max distinct users over the horizon
  double saturation = 1.0;           // beta_i in [0,1]; 1 disables saturation
  std::vector<double> prices;        // one per time step, prices[t-1] >= 0
};

struct AdoptionEntry {
  UserId user = 0;
  ItemId item = 0;
  TimeStep time = 1;
  double prob = 0.0;  // primitive adoption probability, in (0,1]
};

/// Immutable problem input. Only strictly positive adoption probabilities are
/// stored; their count is the effective input size. Entries are kept sorted by
/// (user, item, time) with spans per user and per (user, item) pair.
class Instance {
 public:
  Instance() = default;

  // Validates all invariants, sorts entries, builds lookup spans.
  // Throws ValidationError naming the first violated invariant.
  static Instance from_parts(std::uint32_t num_users, TimeStep horizon,
                             std::uint32_t display_k, std::vector<ItemSpec> items,
                             std::vector<AdoptionEntry> adoption);

  std::uint32_t num_users() const { return num_users_; }
  TimeStep horizon() const { return horizon_; }
  std::uint32_t display_k() const { return display_k_; }
  const std::vector<ItemSpec>& items() const { return items_; }
  const ItemSpec& item(ItemId i) const { return items_[i]; }
  ClassId item_class(ItemId i) const { return items_[i].class_id; }
  double price(ItemId i, TimeStep t) const { return items_[i].prices[t - 1]; }
  double beta(ItemId i) const { return items_[i].saturation; }
  std::uint32_t num_classes() const { return num_classes_; }

  const std::vector<AdoptionEntry>& entries() const { return entries_; }
  std::span<const AdoptionEntry> user_entries(UserId u) const;
  // 0 when the (u,i,t) entry is absent
  double adoption(UserId u, ItemId i, TimeStep t) const;

  struct Pair {
    UserId user;
    ItemId item;
    std::uint32_t begin;  // span into entries()
    std::uint32_t end;
  };
  // (user,item) pairs holding at least one positive entry, in (user,item) order
  const std::vector<Pair>& pairs() const { return pairs_; }

  // instance with every saturation factor replaced (used by GlobalNo)
  Instance with_uniform_beta(double beta) const;

 private:
  std::uint32_t num_users_ = 0;
  TimeStep horizon_ = 1;
  std::uint32_t display_k_ = 1;
  std::uint32_t num_classes_ = 0;
  std::vector<ItemSpec> items_;
  std::vector<AdoptionEntry> entries_;
  std::vector<std::uint32_t> user_offsets_;  // size num_users_+1
  std::vector<Pair> pairs_;
};

// Text instance format: one self-describing JSON document (schema in README).
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);
std::string canonical_text(const Instance& inst);
std::uint64_t fingerprint(const Instance& inst);  // FNV-1a over canonical bytes

/// A set of triples plus the indexes needed for O(1) constraint checks and
/// per-(user,class) retrieval. Indexes are maintained incrementally on insert;
/// rebuild_indexes_equal() lets tests confirm they match a from-scratch build.
class Strategy {
 public:
  Strategy() = default;
  explicit Strategy(const Instance& inst) : inst_(&inst) {}
  static Strategy from_triples(const Instance& inst, std::span<const Triple> triples);

  const Instance* instance() const { return inst_; }
  bool contains(const Triple& z) const { return triples_.count(z) > 0; }
  // false when z was already present (no change)
  bool insert(const Triple& z);
  const std::set<Triple>& triples() const { return triples_; }
  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }

  std::uint32_t user_time_count(UserId u, TimeStep t) const;
  std::uint32_t item_user_count(ItemId i) const;
  bool item_has_user(ItemId i, UserId u) const;

  struct Placement {
    TimeStep time;
    ItemId item;
    auto operator<=>(const Placement&) const = default;
  };
  // committed placements of the user within one item class, time-sorted
  std::span<const Placement> user_class_placements(UserId u, ClassId c) const;

  bool indexes_consistent() const;

 private:
  const Instance* inst_ = nullptr;
  std::set<Triple> triples_;
  std::unordered_map<std::uint64_t, std::uint32_t> per_user_time_count_;
  std::unordered_map<ItemId, std::unordered_set<UserId>> per_item_users_;
  std::unordered_map<std::uint64_t, std::vector<Placement>> per_user_class_;
};

struct ValidityReport {
  struct DisplayViolation {
    UserId user;
    TimeStep time;
    std::uint32_t count;  // > k
  };
  struct CapacityViolation {
    ItemId item;
    std::uint32_t distinct_users;  // > q_i
  };
  std::vector<DisplayViolation> display_violations;
  std::vector<CapacityViolation> capacity_violations;
  bool display_ok() const { return display_violations.empty(); }
  bool capacity_ok() const { return capacity_violations.empty(); }
  bool valid() const { return display_ok() && capacity_ok(); }
};

ValidityReport validate_strategy(const Instance& inst, const Strategy& s);

inline std::uint64_t pack_pair(std::uint64_t a, std::uint64_t b) {
  return (a << 32) | b;
}

}  // namespace revmax
