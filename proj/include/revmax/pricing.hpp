#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include "revmax/model.hpp"

namespace revmax {

// h* = (4 sigma^5 / (3n))^(1/5), sample standard deviation with divisor n-1.
// Throws on fewer than two samples or zero deviation.
double silverman_bandwidth(std::span<const double> samples);

enum class KdeMode {
  // collapses the fit to one Gaussian with mu = sum(p_j) / (n h) and
  // variance h; note the location carries a 1/h that a true kernel mixture
  // does not have, so this mode exists for reproducing numbers derived under
  // that convention
  paper_gaussian,
  // standard Gaussian-kernel mixture: component j is Normal(p_j, h^2);
  // overall mean is the sample mean and variance sigma_hat^2 + h^2
  mixture,
};

/// Price (and valuation) distribution fitted from observed prices.
/// mixture is the default everywhere a mode isn't forced.
struct KdeModel {
  std::vector<double> samples;
  double bandwidth = 0.0;  // h
  double mu = 0.0;
  double sigma = 0.0;
  KdeMode mode = KdeMode::mixture;

  static KdeModel fit(std::vector<double> samples, KdeMode mode);  // Silverman bandwidth
  static KdeModel with_bandwidth(std::vector<double> samples, double h, KdeMode mode);
};

// Pr[valuation >= price] and its first two price derivatives
double valuation_tail(const KdeModel& m, double price);
double valuation_tail_d1(const KdeModel& m, double price);
double valuation_tail_d2(const KdeModel& m, double price);

// q = tail * rating / r_max, clamped to [0,1]
double primitive_adoption(double pred_rating, double r_max, double tail);

// seeded draws from the fitted distribution, negative draws clamped to 0
std::vector<double> sample_prices(const KdeModel& m, std::uint32_t t_steps,
                                  std::uint64_t seed);

/// Per-(item,time) price means with a covariance description over pairs that
/// compete within some user's class group. Variances default to zero;
/// a covariance between two genuinely random prices must be supplied
/// explicitly, while pairs touching a zero-variance price are zero by
/// necessity.
class RandomPriceModel {
 public:
  void set_mean(ItemId i, TimeStep t, double mean);
  void set_variance(ItemId i, TimeStep t, double variance);
  void set_covariance(ItemId i1, TimeStep t1, ItemId i2, TimeStep t2, double cov);

  bool has_mean(ItemId i, TimeStep t) const;
  double mean(ItemId i, TimeStep t) const;      // throws when missing
  double variance(ItemId i, TimeStep t) const;  // 0 when unset
  double covariance(ItemId i1, TimeStep t1, ItemId i2, TimeStep t2) const;

 private:
  std::unordered_map<std::uint64_t, double> means_;
  std::unordered_map<std::uint64_t, double> vars_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, double> covs_;
};

/// Price-to-probability map: items with a fitted valuation model get
/// q(u,i,p) = tail_i(p) * rating(u,i) / r_max; items without one fall back to
/// the instance's stored (price-constant) adoption probability.
struct AdoptionPriceModel {
  std::unordered_map<ItemId, KdeModel> valuations;
  std::unordered_map<std::uint64_t, double> ratings;  // pack_pair(user,item)
  double r_max = 5.0;

  bool price_dependent(ItemId i) const { return valuations.count(i) > 0; }
  double rating(UserId u, ItemId i) const;
  double prob(const Instance& inst, UserId u, ItemId i, TimeStep t, double price) const;
  double dprob(UserId u, ItemId i, double price) const;
  double d2prob(UserId u, ItemId i, double price) const;
};

enum class HessianMode { analytic, finite_difference };

// Second-order delta-method revenue under random prices: each triple's
// contribution g, a function of the price vector of its same-user same-class
// competitors at tau <= t, is expanded around the mean prices; the expectation
// keeps g(mean) plus Hessian-weighted variance and covariance terms. The
// memory/saturation exponent carries no price dependence.
double taylor_expected_revenue(const Instance& inst, const Strategy& s,
                               const RandomPriceModel& prices,
                               const AdoptionPriceModel& adoption,
                               HessianMode mode = HessianMode::analytic);

}  // namespace revmax
