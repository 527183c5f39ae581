#pragma once

#include <cstdint>

#include "revmax/model.hpp"

namespace revmax {

struct SynthConfig {
  std::uint32_t num_users = 100;
  std::uint32_t num_items = 200;
  TimeStep horizon = 5;
  std::uint32_t items_per_user = 100;
  std::uint32_t num_classes = 10;
  std::uint32_t display_k = 5;

  enum class CapacityKind { gaussian, exponential };
  CapacityKind capacity_kind = CapacityKind::gaussian;
  double capacity_mean = 5000.0;   // gaussian mean | exponential 1/rate
  double capacity_spread = 300.0;  // gaussian stddev; unused for exponential

  double price_base_lo = 10.0;  // x_i range; prices land in [x_i, 2 x_i]
  double price_base_hi = 500.0;
  double adoption_sigma = 0.1;  // stddev of the per-(user,item) adoption draws
  double fixed_beta = -1.0;     // saturation for all items; < 0 draws each uniformly from [0,1]

  std::uint64_t seed = 0;
};

// Seeded synthetic instance: per item a base value x_i ~ U[lo,hi] with prices
// U[x_i, 2 x_i]; per user items_per_user distinct items, each carrying T
// adoption draws from Normal(y, sigma^2) with y ~ U[0,1], clamped into (0,1]
// (non-positive draws are redrawn so the triple count stays exactly
// num_users * items_per_user * T), then matched to prices so that a higher
// probability always sits on a lower price. Classes are assigned round-robin.
// Per-user streams are derived from (seed, user), so output is reproducible.
Instance generate(const SynthConfig& cfg);

}  // namespace revmax
