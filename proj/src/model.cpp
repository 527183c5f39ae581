#include "revmax/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace revmax {

namespace {

std::string triple_str(UserId u, ItemId i, TimeStep t) {
  std::ostringstream os;
  os << "(u=" << u << ",i=" << i << ",t=" << t << ")";
  return os.str();
}

}  // namespace

Instance Instance::from_parts(std::uint32_t num_users, TimeStep horizon,
                              std::uint32_t display_k, std::vector<ItemSpec> items,
                              std::vector<AdoptionEntry> adoption) {
  if (horizon < 1) throw ValidationError("invalid instance: horizon must be >= 1");
  if (display_k < 1) throw ValidationError("invalid instance: display_k must be >= 1");

  std::sort(items.begin(), items.end(),
            [](const ItemSpec& a, const ItemSpec& b) { return a.item_id < b.item_id; });
  for (std::size_t i = 0; i < items.size(); ++i) {
    const ItemSpec& it = items[i];
    if (it.item_id != i)
      throw ValidationError("invalid instance: item ids must be exactly 0.." +
                            std::to_string(items.size() - 1) + ", got id " +
                            std::to_string(it.item_id));
    if (it.prices.size() != horizon)
      throw ValidationError("invalid instance: item " + std::to_string(it.item_id) +
                            " has " + std::to_string(it.prices.size()) +
                            " prices, expected " + std::to_string(horizon));
    for (double p : it.prices)
      if (!(p >= 0.0))
        throw ValidationError("invalid instance: negative price on item " +
                              std::to_string(it.item_id));
    if (!(it.saturation >= 0.0 && it.saturation <= 1.0))
      throw ValidationError("invalid instance: saturation of item " +
                            std::to_string(it.item_id) + " outside [0,1]");
  }

  std::sort(adoption.begin(), adoption.end(),
            [](const AdoptionEntry& a, const AdoptionEntry& b) {
              return std::tie(a.user, a.item, a.time) < std::tie(b.user, b.item, b.time);
            });
  for (std::size_t e = 0; e < adoption.size(); ++e) {
    const AdoptionEntry& a = adoption[e];
    if (a.user >= num_users)
      throw ValidationError("invalid instance: adoption user out of range at " +
                            triple_str(a.user, a.item, a.time));
    if (a.item >= items.size())
      throw ValidationError("invalid instance: adoption item out of range at " +
                            triple_str(a.user, a.item, a.time));
    if (a.time < 1 || a.time > horizon)
      throw ValidationError("invalid instance: adoption time out of [1,T] at " +
                            triple_str(a.user, a.item, a.time));
    if (!(a.prob > 0.0 && a.prob <= 1.0))
      throw ValidationError("invalid instance: adoption probability outside (0,1] at " +
                            triple_str(a.user, a.item, a.time));
    if (e > 0) {
      const AdoptionEntry& prev = adoption[e - 1];
      if (prev.user == a.user && prev.item == a.item && prev.time == a.time)
        throw ValidationError("invalid instance: duplicate adoption key " +
                              triple_str(a.user, a.item, a.time));
    }
  }

  Instance inst;
  inst.num_users_ = num_users;
  inst.horizon_ = horizon;
  inst.display_k_ = display_k;
  inst.items_ = std::move(items);
  inst.entries_ = std::move(adoption);

  ClassId max_class = 0;
  for (const ItemSpec& it : inst.items_) max_class = std::max(max_class, it.class_id);
  inst.num_classes_ = inst.items_.empty() ? 0 : max_class + 1;

  inst.user_offsets_.assign(num_users + 1, 0);
  for (const AdoptionEntry& a : inst.entries_) inst.user_offsets_[a.user + 1]++;
  for (std::uint32_t u = 0; u < num_users; ++u)
    inst.user_offsets_[u + 1] += inst.user_offsets_[u];

  for (std::uint32_t e = 0; e < inst.entries_.size();) {
    std::uint32_t b = e;
    while (e < inst.entries_.size() && inst.entries_[e].user == inst.entries_[b].user &&
           inst.entries_[e].item == inst.entries_[b].item)
      ++e;
    inst.pairs_.push_back({inst.entries_[b].user, inst.entries_[b].item, b, e});
  }
  return inst;
}

std::span<const AdoptionEntry> Instance::user_entries(UserId u) const {
  return {entries_.data() + user_offsets_[u], entries_.data() + user_offsets_[u + 1]};
}

double Instance::adoption(UserId u, ItemId i, TimeStep t) const {
  if (u >= num_users_) return 0.0;
  auto span = user_entries(u);
  auto it = std::lower_bound(span.begin(), span.end(), std::tie(i, t),
                             [](const AdoptionEntry& a, const std::tuple<ItemId, TimeStep>& k) {
                               return std::tie(a.item, a.time) < k;
                             });
  if (it != span.end() && it->item == i && it->time == t) return it->prob;
  return 0.0;
}

Instance Instance::with_uniform_beta(double beta) const {
  Instance copy = *this;
  for (ItemSpec& it : copy.items_) it.saturation = beta;
  return copy;
}

// ---------------------------------------------------------------------------
// file I/O

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("parse error: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("parse error: " + std::string(e.what()));
  }

  try {
    std::uint32_t num_users = j.at("num_users").get<std::uint32_t>();
    TimeStep horizon = j.at("horizon").get<TimeStep>();
    std::uint32_t display_k = j.at("display_k").get<std::uint32_t>();

    std::vector<ItemSpec> items;
    for (const auto& ji : j.at("items")) {
      ItemSpec it;
      it.item_id = ji.at("id").get<ItemId>();
      it.class_id = ji.at("class").get<ClassId>();
      it.capacity = ji.at("capacity").get<std::uint32_t>();
      it.saturation = ji.at("beta").get<double>();
      it.prices = ji.at("prices").get<std::vector<double>>();
      items.push_back(std::move(it));
    }

    std::vector<AdoptionEntry> adoption;
    std::set<std::tuple<UserId, ItemId, TimeStep>> seen;
    for (const auto& ja : j.at("adoption")) {
      AdoptionEntry a;
      a.user = ja.at("user").get<UserId>();
      a.item = ja.at("item").get<ItemId>();
      a.time = ja.at("time").get<TimeStep>();
      a.prob = ja.at("prob").get<double>();
      if (!seen.insert({a.user, a.item, a.time}).second)
        throw ParseError("parse error: duplicate adoption key " +
                         triple_str(a.user, a.item, a.time));
      adoption.push_back(a);
    }
    return Instance::from_parts(num_users, horizon, display_k, std::move(items),
                                std::move(adoption));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("parse error: " + std::string(e.what()));
  }
}

std::string canonical_text(const Instance& inst) {
  nlohmann::json j;
  j["num_users"] = inst.num_users();
  j["horizon"] = inst.horizon();
  j["display_k"] = inst.display_k();
  auto items = nlohmann::json::array();
  for (const ItemSpec& it : inst.items()) {
    nlohmann::json ji;
    ji["id"] = it.item_id;
    ji["class"] = it.class_id;
    ji["capacity"] = it.capacity;
    ji["beta"] = it.saturation;
    ji["prices"] = it.prices;
    items.push_back(std::move(ji));
  }
  j["items"] = std::move(items);
  auto adoption = nlohmann::json::array();
  for (const AdoptionEntry& a : inst.entries()) {
    nlohmann::json ja;
    ja["user"] = a.user;
    ja["item"] = a.item;
    ja["time"] = a.time;
    ja["prob"] = a.prob;
    adoption.push_back(std::move(ja));
  }
  j["adoption"] = std::move(adoption);
  return j.dump(2) + "\n";
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << canonical_text(inst);
}

std::uint64_t fingerprint(const Instance& inst) {
  const std::string text = canonical_text(inst);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Strategy

Strategy Strategy::from_triples(const Instance& inst, std::span<const Triple> triples) {
  Strategy s(inst);
  for (const Triple& z : triples) s.insert(z);
  return s;
}

bool Strategy::insert(const Triple& z) {
  if (inst_ == nullptr) throw std::logic_error("Strategy::insert: no instance bound");
  if (z.user >= inst_->num_users() || z.item >= inst_->items().size() || z.time < 1 ||
      z.time > inst_->horizon())
    throw std::out_of_range("Strategy::insert: triple indices out of range");
  if (!triples_.insert(z).second) return false;
  per_user_time_count_[pack_pair(z.user, z.time)]++;
  per_item_users_[z.item].insert(z.user);
  auto& placements = per_user_class_[pack_pair(z.user, inst_->item_class(z.item))];
  Placement p{z.time, z.item};
  placements.insert(std::upper_bound(placements.begin(), placements.end(), p), p);
  return true;
}

std::uint32_t Strategy::user_time_count(UserId u, TimeStep t) const {
  auto it = per_user_time_count_.find(pack_pair(u, t));
  return it == per_user_time_count_.end() ? 0 : it->second;
}

std::uint32_t Strategy::item_user_count(ItemId i) const {
  auto it = per_item_users_.find(i);
  return it == per_item_users_.end() ? 0 : static_cast<std::uint32_t>(it->second.size());
}

bool Strategy::item_has_user(ItemId i, UserId u) const {
  auto it = per_item_users_.find(i);
  return it != per_item_users_.end() && it->second.count(u) > 0;
}

std::span<const Strategy::Placement> Strategy::user_class_placements(UserId u,
                                                                     ClassId c) const {
  auto it = per_user_class_.find(pack_pair(u, c));
  if (it == per_user_class_.end()) return {};
  return {it->second.data(), it->second.size()};
}

bool Strategy::indexes_consistent() const {
  if (inst_ == nullptr) return triples_.empty();
  Strategy rebuilt(*inst_);
  for (const Triple& z : triples_) rebuilt.insert(z);
  return rebuilt.per_user_time_count_ == per_user_time_count_ &&
         rebuilt.per_item_users_ == per_item_users_ &&
         rebuilt.per_user_class_ == per_user_class_;
}

ValidityReport validate_strategy(const Instance& inst, const Strategy& s) {
  ValidityReport report;
  std::map<std::pair<UserId, TimeStep>, std::uint32_t> slot_counts;
  std::map<ItemId, std::set<UserId>> item_users;
  for (const Triple& z : s.triples()) {
    slot_counts[{z.user, z.time}]++;
    item_users[z.item].insert(z.user);
  }
  for (const auto& [slot, count] : slot_counts)
    if (count > inst.display_k())
      report.display_violations.push_back({slot.first, slot.second, count});
  for (const auto& [item, users] : item_users)
    if (users.size() > inst.item(item).capacity)
      report.capacity_violations.push_back(
          {item, static_cast<std::uint32_t>(users.size())});
  return report;
}

}  // namespace revmax
