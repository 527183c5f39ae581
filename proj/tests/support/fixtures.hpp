#pragma once

#include <set>
#include <vector>

#include "revmax/model.hpp"
#include "revmax/rng.hpp"

namespace fixtures {

using revmax::AdoptionEntry;
using revmax::Instance;
using revmax::ItemSpec;
using revmax::Rng;
using revmax::TimeStep;
using revmax::Triple;

// the worked non-monotonicity instance: one user, one item, T=2, k=1, q=2,
// probabilities (0.5, 0.6), prices (1, 0.95), beta 0.1
inline Instance example2_instance() {
  std::vector<ItemSpec> items{{0, 0, 2, 0.1, {1.0, 0.95}}};
  std::vector<AdoptionEntry> adoption{{0, 0, 1, 0.5}, {0, 0, 2, 0.6}};
  return Instance::from_parts(1, 2, 1, std::move(items), std::move(adoption));
}

// two same-class items so that {(u,0,1),(u,1,2),(u,0,3)} carries primitive
// probability a on every triple and shared saturation beta
inline Instance example1_instance(double a, double beta) {
  std::vector<ItemSpec> items{{0, 0, 5, beta, {1.0, 1.0, 1.0}},
                              {1, 0, 5, beta, {1.0, 1.0, 1.0}}};
  std::vector<AdoptionEntry> adoption{{0, 0, 1, a}, {0, 1, 2, a}, {0, 0, 3, a}};
  return Instance::from_parts(1, 3, 1, std::move(items), std::move(adoption));
}

inline std::vector<Triple> example1_triples() {
  return {{0, 0, 1}, {0, 1, 2}, {0, 0, 3}};
}

struct RandomSpec {
  std::uint32_t users = 3;
  std::uint32_t items = 3;
  std::uint32_t classes = 2;
  TimeStep horizon = 2;
  std::uint32_t display_k = 2;
  double density = 0.7;       // chance a (u,i,t) entry exists
  bool degenerate_beta = true;  // occasionally force beta to exactly 0 or 1
};

inline Instance random_instance(Rng& rng, const RandomSpec& spec = {}) {
  std::vector<ItemSpec> items;
  for (std::uint32_t i = 0; i < spec.items; ++i) {
    ItemSpec it;
    it.item_id = i;
    it.class_id = static_cast<std::uint32_t>(rng.below(spec.classes));
    it.capacity = 1 + static_cast<std::uint32_t>(rng.below(spec.users));
    it.saturation = rng.uniform01();
    if (spec.degenerate_beta) {
      const double roll = rng.uniform01();
      if (roll < 0.1)
        it.saturation = 0.0;
      else if (roll < 0.2)
        it.saturation = 1.0;
    }
    for (TimeStep t = 0; t < spec.horizon; ++t)
      it.prices.push_back(rng.uniform(0.0, 2.0));
    items.push_back(std::move(it));
  }
  std::vector<AdoptionEntry> adoption;
  for (std::uint32_t u = 0; u < spec.users; ++u)
    for (std::uint32_t i = 0; i < spec.items; ++i)
      for (TimeStep t = 1; t <= spec.horizon; ++t)
        if (rng.uniform01() < spec.density) {
          double p = rng.uniform01();
          if (p <= 0.0) p = 0.5;
          adoption.push_back({u, i, t, p});
        }
  return Instance::from_parts(spec.users, spec.horizon, spec.display_k, std::move(items),
                              std::move(adoption));
}

inline std::vector<Triple> positive_triples(const Instance& inst) {
  std::vector<Triple> out;
  for (const AdoptionEntry& a : inst.entries()) out.push_back({a.user, a.item, a.time});
  return out;
}

// random subset of the positive triples, no validity requirement
inline std::set<Triple> random_subset(Rng& rng, const Instance& inst, double keep) {
  std::set<Triple> s;
  for (const Triple& z : positive_triples(inst))
    if (rng.uniform01() < keep) s.insert(z);
  return s;
}

}  // namespace fixtures
