#include "revmax/pricing.hpp"

#include <algorithm>
#include <cmath>

#include "revmax/revenue.hpp"
#include "revmax/rng.hpp"

namespace revmax {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// Pr[N(mu, sigma^2) >= p]
double gauss_tail(double p, double mu, double sigma) {
  return 0.5 * std::erfc((p - mu) / (sigma * std::sqrt(2.0)));
}

double gauss_tail_d1(double p, double mu, double sigma) {
  const double s = (p - mu) / sigma;
  return -std_normal_pdf(s) / sigma;
}

double gauss_tail_d2(double p, double mu, double sigma) {
  const double s = (p - mu) / sigma;
  return s * std_normal_pdf(s) / (sigma * sigma);
}

double sample_mean(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double sample_stddev(std::span<const double> v) {
  const double mean = sample_mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

double silverman_bandwidth(std::span<const double> samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("silverman_bandwidth: need at least 2 samples");
  const double sd = sample_stddev(samples);
  if (!(sd > 0.0))
    throw std::invalid_argument("silverman_bandwidth: degenerate samples (zero deviation)");
  return std::pow(4.0 * std::pow(sd, 5.0) / (3.0 * static_cast<double>(samples.size())),
                  0.2);
}

KdeModel KdeModel::with_bandwidth(std::vector<double> samples, double h, KdeMode mode) {
  if (samples.empty()) throw std::invalid_argument("KdeModel: need at least 1 sample");
  if (!(h > 0.0)) throw std::invalid_argument("KdeModel: bandwidth must be positive");
  KdeModel m;
  m.samples = std::move(samples);
  m.bandwidth = h;
  m.mode = mode;
  const double n = static_cast<double>(m.samples.size());
  double sum = 0.0;
  for (double p : m.samples) sum += p;
  if (mode == KdeMode::paper_gaussian) {
    m.mu = sum / (n * h);
    m.sigma = std::sqrt(h);
  } else {
    m.mu = sum / n;
    double ss = 0.0;
    for (double p : m.samples) ss += (p - m.mu) * (p - m.mu);
    const double var = m.samples.size() > 1 ? ss / (n - 1.0) : 0.0;
    m.sigma = std::sqrt(var + h * h);
  }
  return m;
}

KdeModel KdeModel::fit(std::vector<double> samples, KdeMode mode) {
  const double h = silverman_bandwidth(samples);
  return with_bandwidth(std::move(samples), h, mode);
}

double valuation_tail(const KdeModel& m, double price) {
  if (m.mode == KdeMode::paper_gaussian) return gauss_tail(price, m.mu, m.sigma);
  double sum = 0.0;
  for (double p : m.samples) sum += gauss_tail(price, p, m.bandwidth);
  return sum / static_cast<double>(m.samples.size());
}

double valuation_tail_d1(const KdeModel& m, double price) {
  if (m.mode == KdeMode::paper_gaussian) return gauss_tail_d1(price, m.mu, m.sigma);
  double sum = 0.0;
  for (double p : m.samples) sum += gauss_tail_d1(price, p, m.bandwidth);
  return sum / static_cast<double>(m.samples.size());
}

double valuation_tail_d2(const KdeModel& m, double price) {
  if (m.mode == KdeMode::paper_gaussian) return gauss_tail_d2(price, m.mu, m.sigma);
  double sum = 0.0;
  for (double p : m.samples) sum += gauss_tail_d2(price, p, m.bandwidth);
  return sum / static_cast<double>(m.samples.size());
}

double primitive_adoption(double pred_rating, double r_max, double tail) {
  if (!(r_max > 0.0)) throw std::invalid_argument("primitive_adoption: r_max must be > 0");
  if (!(pred_rating >= 0.0 && pred_rating <= r_max))
    throw std::invalid_argument("primitive_adoption: rating outside [0, r_max]");
  if (!(tail >= 0.0 && tail <= 1.0))
    throw std::invalid_argument("primitive_adoption: tail outside [0,1]");
  return std::clamp(tail * pred_rating / r_max, 0.0, 1.0);
}

std::vector<double> sample_prices(const KdeModel& m, std::uint32_t t_steps,
                                  std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(t_steps);
  for (std::uint32_t t = 0; t < t_steps; ++t) {
    double draw;
    if (m.mode == KdeMode::paper_gaussian) {
      draw = rng.normal(m.mu, m.sigma);
    } else {
      const double center = m.samples[rng.below(m.samples.size())];
      draw = rng.normal(center, m.bandwidth);
    }
    out.push_back(std::max(0.0, draw));
  }
  return out;
}

// ---------------------------------------------------------------------------
// RandomPriceModel

void RandomPriceModel::set_mean(ItemId i, TimeStep t, double mean) {
  means_[pack_pair(i, t)] = mean;
}

void RandomPriceModel::set_variance(ItemId i, TimeStep t, double variance) {
  if (variance < 0.0) throw ValidationError("variance must be non-negative");
  vars_[pack_pair(i, t)] = variance;
}

void RandomPriceModel::set_covariance(ItemId i1, TimeStep t1, ItemId i2, TimeStep t2,
                                      double cov) {
  std::uint64_t a = pack_pair(i1, t1), b = pack_pair(i2, t2);
  if (a > b) std::swap(a, b);
  covs_[{a, b}] = cov;
}

bool RandomPriceModel::has_mean(ItemId i, TimeStep t) const {
  return means_.count(pack_pair(i, t)) > 0;
}

double RandomPriceModel::mean(ItemId i, TimeStep t) const {
  auto it = means_.find(pack_pair(i, t));
  if (it == means_.end())
    throw std::invalid_argument("price model: missing mean for item " + std::to_string(i) +
                                " time " + std::to_string(t));
  return it->second;
}

double RandomPriceModel::variance(ItemId i, TimeStep t) const {
  auto it = vars_.find(pack_pair(i, t));
  return it == vars_.end() ? 0.0 : it->second;
}

double RandomPriceModel::covariance(ItemId i1, TimeStep t1, ItemId i2, TimeStep t2) const {
  std::uint64_t a = pack_pair(i1, t1), b = pack_pair(i2, t2);
  if (a > b) std::swap(a, b);
  auto it = covs_.find({a, b});
  const double v1 = variance(i1, t1), v2 = variance(i2, t2);
  if (it == covs_.end()) {
    if (v1 == 0.0 || v2 == 0.0) return 0.0;  // forced by positive semidefiniteness
    throw std::invalid_argument("price model: missing covariance for items " +
                                std::to_string(i1) + "@" + std::to_string(t1) + " and " +
                                std::to_string(i2) + "@" + std::to_string(t2));
  }
  if (it->second * it->second > v1 * v2 * (1.0 + 1e-9))
    throw ValidationError("price model: covariance block not positive semidefinite");
  return it->second;
}

// ---------------------------------------------------------------------------
// AdoptionPriceModel

double AdoptionPriceModel::rating(UserId u, ItemId i) const {
  auto it = ratings.find(pack_pair(u, i));
  return it == ratings.end() ? 0.0 : it->second;
}

double AdoptionPriceModel::prob(const Instance& inst, UserId u, ItemId i, TimeStep t,
                                double price) const {
  auto it = valuations.find(i);
  if (it == valuations.end()) return inst.adoption(u, i, t);
  return primitive_adoption(rating(u, i), r_max, valuation_tail(it->second, price));
}

double AdoptionPriceModel::dprob(UserId u, ItemId i, double price) const {
  auto it = valuations.find(i);
  if (it == valuations.end()) return 0.0;
  return rating(u, i) / r_max * valuation_tail_d1(it->second, price);
}

double AdoptionPriceModel::d2prob(UserId u, ItemId i, double price) const {
  auto it = valuations.find(i);
  if (it == valuations.end()) return 0.0;
  return rating(u, i) / r_max * valuation_tail_d2(it->second, price);
}

// ---------------------------------------------------------------------------
// Taylor revenue

namespace {

// one competing price variable of a triple's contribution
struct PriceVar {
  ItemId item;
  TimeStep time;
  double mean;
  double q;    // primitive adoption probability at the mean price
  double dq;   // d q / d price at the mean
  double d2q;  // second derivative at the mean
  bool self;   // the triple whose contribution this is
};

// g = p_self * q_self(p_self) * sat * prod_{a != self} (1 - q_a(p_a)),
// evaluated with price offsets applied to selected coordinates (for the
// finite-difference path)
double contribution_at(const Instance& inst, const AdoptionPriceModel& adoption, UserId u,
                       double sat, const std::vector<PriceVar>& vars,
                       const std::vector<double>& offsets) {
  double g = sat;
  for (std::size_t a = 0; a < vars.size(); ++a) {
    const PriceVar& v = vars[a];
    const double price = v.mean + offsets[a];
    const double q = adoption.prob(inst, u, v.item, v.time, price);
    if (v.self)
      g *= price * q;
    else
      g *= 1.0 - q;
  }
  return g;
}

}  // namespace

double taylor_expected_revenue(const Instance& inst, const Strategy& s,
                               const RandomPriceModel& prices,
                               const AdoptionPriceModel& adoption, HessianMode mode) {
  double total = 0.0;
  for (const Triple& z : s.triples()) {
    const ClassId c = inst.item_class(z.item);

    std::vector<PriceVar> vars;
    double mem = 0.0;
    for (const auto& p : s.user_class_placements(z.user, c)) {
      if (p.time > z.time) break;
      const bool self = p.time == z.time && p.item == z.item;
      if (p.time < z.time) mem += 1.0 / static_cast<double>(z.time - p.time);
      const double m = prices.mean(p.item, p.time);
      vars.push_back({p.item, p.time, m, adoption.prob(inst, z.user, p.item, p.time, m),
                      adoption.dprob(z.user, p.item, m), adoption.d2prob(z.user, p.item, m),
                      self});
    }
    const double sat = saturation_pow(inst.beta(z.item), mem);

    std::size_t self_idx = vars.size();
    for (std::size_t a = 0; a < vars.size(); ++a)
      if (vars[a].self) self_idx = a;
    if (self_idx == vars.size())
      throw std::logic_error("taylor_expected_revenue: triple missing from its own group");
    const PriceVar& self = vars[self_idx];

    // g at the mean prices
    double others = 1.0;
    for (std::size_t a = 0; a < vars.size(); ++a)
      if (a != self_idx) others *= 1.0 - vars[a].q;
    total += self.mean * self.q * sat * others;

    const auto leave_out = [&](std::size_t skip1, std::size_t skip2) {
      double prod = 1.0;
      for (std::size_t a = 0; a < vars.size(); ++a)
        if (a != self_idx && a != skip1 && a != skip2) prod *= 1.0 - vars[a].q;
      return prod;
    };

    const std::size_t n = vars.size();
    std::vector<double> offsets(n, 0.0);
    const auto hessian = [&](std::size_t a, std::size_t b) -> double {
      if (mode == HessianMode::finite_difference) {
        const double ha = std::max(1e-4 * std::abs(vars[a].mean), 1e-6);
        const double hb = std::max(1e-4 * std::abs(vars[b].mean), 1e-6);
        auto g_at = [&]() {
          return contribution_at(inst, adoption, z.user, sat, vars, offsets);
        };
        double h;
        if (a == b) {
          const double g0 = g_at();
          offsets[a] = ha;
          const double gp = g_at();
          offsets[a] = -ha;
          const double gm = g_at();
          offsets[a] = 0.0;
          h = (gp - 2.0 * g0 + gm) / (ha * ha);
        } else {
          offsets[a] = ha, offsets[b] = hb;
          const double gpp = g_at();
          offsets[b] = -hb;
          const double gpm = g_at();
          offsets[a] = -ha, offsets[b] = hb;
          const double gmp = g_at();
          offsets[b] = -hb;
          const double gmm = g_at();
          offsets[a] = 0.0, offsets[b] = 0.0;
          h = (gpp - gpm - gmp + gmm) / (4.0 * ha * hb);
        }
        return h;
      }
      // analytic second derivatives of the product form
      const double f = self.mean * self.q;             // p * q(p) at the mean
      const double f1 = self.q + self.mean * self.dq;  // d/dp of p * q(p)
      const double f2 = 2.0 * self.dq + self.mean * self.d2q;
      if (a == b) {
        if (a == self_idx) return sat * f2 * leave_out(n, n);
        return sat * f * (-vars[a].d2q) * leave_out(a, n);
      }
      if (a == self_idx) return sat * f1 * (-vars[b].dq) * leave_out(b, n);
      if (b == self_idx) return sat * f1 * (-vars[a].dq) * leave_out(a, n);
      return sat * f * vars[a].dq * vars[b].dq * leave_out(a, b);
    };

    for (std::size_t a = 0; a < n; ++a) {
      const double var = prices.variance(vars[a].item, vars[a].time);
      if (var != 0.0) total += 0.5 * hessian(a, a) * var;
      for (std::size_t b = a + 1; b < n; ++b) {
        const double cov =
            prices.covariance(vars[a].item, vars[a].time, vars[b].item, vars[b].time);
        if (cov != 0.0) total += hessian(a, b) * cov;
      }
    }
  }
  return total;
}

}  // namespace revmax
