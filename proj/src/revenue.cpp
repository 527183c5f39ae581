#include "revmax/revenue.hpp"

#include <cmath>

namespace revmax {

double memory(const Strategy& s, UserId u, ItemId i, TimeStep t) {
  const Instance& inst = *s.instance();
  double m = 0.0;
  for (const auto& p : s.user_class_placements(u, inst.item_class(i))) {
    if (p.time >= t) break;  // placements are time-sorted
    m += 1.0 / static_cast<double>(t - p.time);
  }
  return m;
}

double dynamic_adoption_prob(const Strategy& s, const Triple& z) {
  if (!s.contains(z)) return 0.0;
  const Instance& inst = *s.instance();
  const ClassId c = inst.item_class(z.item);
  double m = 0.0;
  double competition = 1.0;
  for (const auto& p : s.user_class_placements(z.user, c)) {
    if (p.time > z.time) break;
    if (p.time < z.time) {
      m += 1.0 / static_cast<double>(z.time - p.time);
      competition *= 1.0 - inst.adoption(z.user, p.item, p.time);
    } else if (p.item != z.item) {
      competition *= 1.0 - inst.adoption(z.user, p.item, p.time);
    }
  }
  return inst.adoption(z.user, z.item, z.time) *
         saturation_pow(inst.beta(z.item), m) * competition;
}

double revenue(const Instance& inst, const Strategy& s) {
  double total = 0.0, comp = 0.0;
  for (const Triple& z : s.triples()) {
    const double term = inst.price(z.item, z.time) * dynamic_adoption_prob(s, z);
    const double y = term - comp;
    const double t = total + y;
    comp = (t - total) - y;
    total = t;
  }
  return total;
}

RevenueEvaluator::RevenueEvaluator(const Instance& inst)
    : inst_(&inst), strat_(inst) {}

const std::vector<RevenueEvaluator::CommitRec>* RevenueEvaluator::recs_for(
    UserId u, ClassId c) const {
  auto it = sets_.find(pack_pair(u, c));
  return it == sets_.end() ? nullptr : &it->second;
}

RevenueEvaluator::Pending RevenueEvaluator::evaluate(
    const Triple& z, const std::vector<CommitRec>* recs) const {
  const double prim = inst_->adoption(z.user, z.item, z.time);
  double m = 0.0;
  double competition = 1.0;
  double loss = 0.0;
  if (recs != nullptr) {
    for (const CommitRec& rec : *recs) {
      if (rec.time < z.time) {
        m += 1.0 / static_cast<double>(z.time - rec.time);
        competition *= 1.0 - rec.prim;
      } else if (rec.time == z.time) {
        // same slot, same class: mutual same-time competition discount
        competition *= 1.0 - rec.prim;
        loss += rec.price * rec.q * ((1.0 - prim) - 1.0);
      } else {
        const double factor =
            saturation_pow(rec.beta, 1.0 / static_cast<double>(rec.time - z.time)) *
            (1.0 - prim);
        loss += rec.price * rec.q * (factor - 1.0);
      }
    }
  }
  const double q_new = prim * saturation_pow(inst_->beta(z.item), m) * competition;
  return {q_new, inst_->price(z.item, z.time) * q_new, loss};
}

double RevenueEvaluator::marginal_revenue(const Triple& z) const {
  if (strat_.contains(z))
    throw std::invalid_argument("marginal_revenue: triple already committed");
  const Pending p = evaluate(z, recs_for(z.user, inst_->item_class(z.item)));
  return p.gain + p.loss;
}

void RevenueEvaluator::commit(const Triple& z) {
  if (strat_.contains(z))
    throw std::invalid_argument("commit: triple already committed");
  const ClassId c = inst_->item_class(z.item);
  auto& recs = sets_[pack_pair(z.user, c)];
  const Pending p = evaluate(z, &recs);
  const double prim = inst_->adoption(z.user, z.item, z.time);

  for (CommitRec& rec : recs) {
    if (rec.time == z.time) {
      rec.q *= 1.0 - prim;
    } else if (rec.time > z.time) {
      rec.q *= saturation_pow(rec.beta, 1.0 / static_cast<double>(rec.time - z.time)) *
               (1.0 - prim);
    }
  }
  CommitRec nrec{z.time, z.item, prim, inst_->price(z.item, z.time),
                 inst_->beta(z.item), p.q_new};
  auto pos = std::upper_bound(recs.begin(), recs.end(), nrec,
                              [](const CommitRec& a, const CommitRec& b) {
                                return std::tie(a.time, a.item) < std::tie(b.time, b.item);
                              });
  recs.insert(pos, nrec);
  strat_.insert(z);

  const double delta = p.gain + p.loss;
  const double y = delta - kahan_c_;
  const double t = total_ + y;
  kahan_c_ = (t - total_) - y;
  total_ = t;
}

double RevenueEvaluator::cached_probability(const Triple& z) const {
  const auto* recs = recs_for(z.user, inst_->item_class(z.item));
  if (recs == nullptr) return 0.0;
  for (const CommitRec& rec : *recs)
    if (rec.time == z.time && rec.item == z.item) return rec.q;
  return 0.0;
}

}  // namespace revmax
