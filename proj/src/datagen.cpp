#include "revmax/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "revmax/rng.hpp"

namespace revmax {

namespace {

constexpr std::uint64_t kItemSalt = 0x49544d53ULL;  // item-parameter stream

double draw_positive_prob(Rng& rng, double center, double sigma) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    const double v = rng.normal(center, sigma);
    if (v > 0.0) return std::min(v, 1.0);
  }
  return 1e-12;  // keeps the triple count exact even for pathological centers
}

// Floyd's sampling: items_per_user distinct indices out of [0, num_items)
std::vector<std::uint32_t> sample_items(Rng& rng, std::uint32_t num_items,
                                        std::uint32_t count) {
  std::set<std::uint32_t> chosen;
  for (std::uint32_t j = num_items - count; j < num_items; ++j) {
    const std::uint32_t r = static_cast<std::uint32_t>(rng.below(j + 1));
    if (!chosen.insert(r).second) chosen.insert(j);
  }
  return {chosen.begin(), chosen.end()};
}

}  // namespace

Instance generate(const SynthConfig& cfg) {
  if (cfg.items_per_user > cfg.num_items)
    throw std::invalid_argument("generate: items_per_user exceeds num_items");
  if (cfg.num_items == 0 || cfg.num_users == 0 || cfg.num_classes == 0)
    throw std::invalid_argument("generate: empty dimension");
  if (!(cfg.price_base_lo > 0.0 && cfg.price_base_hi > cfg.price_base_lo))
    throw std::invalid_argument("generate: degenerate price range");
  if (!(cfg.adoption_sigma > 0.0))
    throw std::invalid_argument("generate: adoption_sigma must be positive");
  if (cfg.fixed_beta > 1.0)
    throw std::invalid_argument("generate: fixed_beta must be <= 1");
  if (cfg.horizon < 1) throw std::invalid_argument("generate: horizon must be >= 1");

  const TimeStep T = cfg.horizon;

  std::vector<ItemSpec> items(cfg.num_items);
  {
    Rng rng(derive_seed(cfg.seed, kItemSalt));
    for (ItemId i = 0; i < cfg.num_items; ++i) {
      ItemSpec& it = items[i];
      it.item_id = i;
      it.class_id = i % cfg.num_classes;
      const double x = rng.uniform(cfg.price_base_lo, cfg.price_base_hi);
      it.prices.resize(T);
      for (TimeStep t = 0; t < T; ++t) it.prices[t] = rng.uniform(x, 2.0 * x);
      const double beta_draw = rng.uniform01();
      it.saturation = cfg.fixed_beta >= 0.0 ? cfg.fixed_beta : beta_draw;
      double cap;
      if (cfg.capacity_kind == SynthConfig::CapacityKind::gaussian)
        cap = rng.normal(cfg.capacity_mean, cfg.capacity_spread);
      else
        cap = rng.exponential(1.0 / cfg.capacity_mean);
      it.capacity = static_cast<std::uint32_t>(std::max(1.0, std::round(cap)));
    }
  }

  std::vector<AdoptionEntry> entries;
  entries.reserve(static_cast<std::size_t>(cfg.num_users) * cfg.items_per_user * T);
  std::vector<std::pair<double, TimeStep>> by_price(T);
  std::vector<double> probs(T);
  for (UserId u = 0; u < cfg.num_users; ++u) {
    Rng rng(derive_seed(cfg.seed, u + 1));
    for (std::uint32_t item : sample_items(rng, cfg.num_items, cfg.items_per_user)) {
      const double y = rng.uniform01();
      for (TimeStep t = 0; t < T; ++t) probs[t] = draw_positive_prob(rng, y, cfg.adoption_sigma);
      // anti-monotone matching: the largest probability joins the lowest price
      for (TimeStep t = 0; t < T; ++t) by_price[t] = {items[item].prices[t], t + 1};
      std::sort(by_price.begin(), by_price.end());
      std::sort(probs.begin(), probs.end(), std::greater<>());
      for (TimeStep r = 0; r < T; ++r)
        entries.push_back({u, item, by_price[r].second, probs[r]});
    }
  }

  return Instance::from_parts(cfg.num_users, T, cfg.display_k, std::move(items),
                              std::move(entries));
}

}  // namespace revmax
