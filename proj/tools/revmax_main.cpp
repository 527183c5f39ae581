// revmax command-line tool: solve / compare / gen-synth / kde-fit /
// adoption-build / scaling / tail. Output is tab-separated with a one-line
// header per table; lines starting with '#' carry run metadata. Errors leave
// a single machine-parseable "error\t<message>" line on stderr and a
// non-zero exit code. REVMAX_LOG=1 enables progress notes on stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "revmax/driver.hpp"
#include "revmax/pricing.hpp"
#include "revmax/relaxed.hpp"
#include "revmax/revenue.hpp"

namespace {

int log_level() {
  const char* env = std::getenv("REVMAX_LOG");
  return env == nullptr ? 0 : std::atoi(env);
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[revmax] " << msg << "\n";
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ','))
    if (!part.empty()) out.push_back(part);
  return out;
}

std::vector<revmax::TimeStep> parse_cutoffs(const std::string& s) {
  std::vector<revmax::TimeStep> cutoffs;
  for (const std::string& part : split_csv(s))
    cutoffs.push_back(static_cast<revmax::TimeStep>(std::stoul(part)));
  return cutoffs;
}

revmax::SynthConfig parse_synth_flags(std::uint32_t users, std::uint32_t items,
                                      std::uint32_t per_user, std::uint32_t horizon,
                                      std::uint32_t classes, std::uint32_t k,
                                      const std::string& cap, double beta,
                                      const std::string& price_range, double adoption_sigma,
                                      std::uint64_t seed) {
  revmax::SynthConfig cfg;
  cfg.num_users = users;
  cfg.num_items = items;
  cfg.items_per_user = per_user;
  cfg.horizon = horizon;
  cfg.num_classes = classes;
  cfg.display_k = k;
  cfg.fixed_beta = beta;
  cfg.adoption_sigma = adoption_sigma;
  cfg.seed = seed;

  // --cap gaussian:5000,300 | exponential:0.002
  const auto colon = cap.find(':');
  const std::string kind = cap.substr(0, colon);
  const auto params = colon == std::string::npos
                          ? std::vector<std::string>{}
                          : split_csv(cap.substr(colon + 1));
  if (kind == "gaussian") {
    cfg.capacity_kind = revmax::SynthConfig::CapacityKind::gaussian;
    if (params.size() != 2) throw std::invalid_argument("--cap gaussian needs mean,stddev");
    cfg.capacity_mean = std::stod(params[0]);
    cfg.capacity_spread = std::stod(params[1]);
  } else if (kind == "exponential" || kind == "exp") {
    cfg.capacity_kind = revmax::SynthConfig::CapacityKind::exponential;
    if (params.size() != 1) throw std::invalid_argument("--cap exponential needs a rate");
    cfg.capacity_mean = 1.0 / std::stod(params[0]);
  } else {
    throw std::invalid_argument("unknown capacity distribution '" + kind + "'");
  }

  const auto pr = split_csv(price_range);
  if (pr.size() != 2) throw std::invalid_argument("--price-range needs lo,hi");
  cfg.price_base_lo = std::stod(pr[0]);
  cfg.price_base_hi = std::stod(pr[1]);
  return cfg;
}

void emit_report(const revmax::SolveReport& report, bool emit_histogram) {
  std::cout << "algo\texpected_revenue\truntime_ms\tselections\trecomputations\n";
  std::cout << report.algorithm << "\t" << report.expected_revenue << "\t"
            << report.runtime_ms << "\t" << report.selections << "\t"
            << report.recomputations << "\n";
  if (!std::isnan(report.relaxed_objective))
    std::cout << "# relaxed_objective\t" << report.relaxed_objective << "\n";
  if (emit_histogram) {
    std::cout << "repeats\tpairs\tpercent\n";
    for (const auto& row : revmax::normalized_histogram(report))
      std::cout << row.repeats << "\t" << row.pairs << "\t" << row.percent << "\n";
  }
}

void save_strategy(const revmax::Strategy& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "user\titem\ttime\n";
  for (const revmax::Triple& z : s.triples())
    out << z.user << "\t" << z.item << "\t" << z.time << "\n";
}

revmax::Strategy load_strategy(const revmax::Instance& inst, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw revmax::ParseError("parse error: cannot open " + path);
  revmax::Strategy s(inst);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("user", 0) == 0) continue;
    std::istringstream ss(line);
    std::uint32_t u, i, t;
    if (!(ss >> u >> i >> t)) throw revmax::ParseError("parse error: bad strategy line");
    s.insert({u, i, t});
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"revenue-maximizing recommendation strategies over a short horizon"};
  app.require_subcommand(1);

  std::string instance_path, out_path, algo = "gg", algos_csv = "gg,slg,rlg,topre";
  std::string ratings_path, cutoffs_str, prices_path, mode_str = "mixture";
  std::string cap_str = "gaussian:5000,300", price_range = "10,500", sizes_csv;
  std::string strategy_path;
  std::uint64_t seed = 42;
  bool seed_given = false, emit_histogram = false, parallel = false;
  std::uint32_t perms = 5, users = 1000, items = 200, per_user = 20, horizon = 5,
                classes = 10, k = 5, item_id = 0, time_step = 1;
  std::uint64_t mc_samples = 0;
  double rmax = 5.0, beta = -1.0, adoption_sigma = 0.1;
  std::int64_t exclude_user = -1;

  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "RNG seed (default 42, echoed in output)")
        ->each([&](const std::string&) { seed_given = true; });
  };

  auto* solve = app.add_subcommand("solve", "run one solver on an instance");
  solve->add_option("--instance", instance_path)->required();
  solve->add_option("--algo", algo, "gg|slg|rlg|topra|topre|ggno|bf|dcs|rrevmax-ls");
  solve->add_option("--perms", perms, "rlg permutation samples");
  solve->add_option("--cutoffs", cutoffs_str, "staged sub-horizon cutoffs, e.g. 2,4");
  solve->add_option("--ratings", ratings_path, "TSV user item rating (topra)");
  solve->add_option("--out", out_path, "write the strategy as TSV");
  solve->add_flag("--emit-histogram", emit_histogram);
  add_seed(solve);

  auto* compare = app.add_subcommand("compare", "run several solvers on one instance");
  compare->add_option("--instance", instance_path)->required();
  compare->add_option("--algos", algos_csv, "comma-separated algorithm names");
  compare->add_option("--perms", perms);
  compare->add_option("--ratings", ratings_path);
  compare->add_flag("--emit-histogram", emit_histogram);
  compare->add_flag("--parallel", parallel, "run the solvers concurrently");
  add_seed(compare);

  auto* gen = app.add_subcommand("gen-synth", "generate a synthetic instance");
  gen->add_option("--users", users)->required();
  gen->add_option("--items", items)->required();
  gen->add_option("--per-user", per_user)->required();
  gen->add_option("--horizon", horizon)->required();
  gen->add_option("--classes", classes)->required();
  gen->add_option("--k", k, "display limit");
  gen->add_option("--cap", cap_str, "gaussian:mean,std | exponential:rate");
  gen->add_option("--beta", beta, "fixed saturation; omit for uniform [0,1]");
  gen->add_option("--price-range", price_range, "base value range lo,hi");
  gen->add_option("--adoption-sigma", adoption_sigma);
  gen->add_option("--out", out_path)->required();
  add_seed(gen);

  auto* kde = app.add_subcommand("kde-fit", "fit a price distribution");
  kde->add_option("--prices", prices_path, "one price per line")->required();
  kde->add_option("--mode", mode_str, "paper|mixture");

  auto* build = app.add_subcommand("adoption-build",
                                   "combine ratings and fitted price models into adoption");
  build->add_option("--instance", instance_path)->required();
  build->add_option("--ratings", ratings_path)->required();
  build->add_option("--prices", prices_path, "CSV lines item,price")->required();
  build->add_option("--rmax", rmax);
  build->add_option("--mode", mode_str, "paper|mixture");
  build->add_option("--out", out_path)->required();

  auto* scaling = app.add_subcommand("scaling", "time g_greedy across synthetic sizes");
  scaling->add_option("--sizes", sizes_csv, "target triple counts, e.g. 500000,1000000")
      ->required();
  scaling->add_option("--items", items);
  scaling->add_option("--per-user", per_user);
  scaling->add_option("--horizon", horizon);
  scaling->add_option("--classes", classes);
  scaling->add_option("--k", k);
  add_seed(scaling);

  auto* tail = app.add_subcommand("tail", "capacity-tail diagnostics for (item, time)");
  tail->add_option("--instance", instance_path)->required();
  tail->add_option("--item", item_id)->required();
  tail->add_option("--time", time_step)->required();
  tail->add_option("--algo", algo, "solver producing the strategy");
  tail->add_option("--strategy", strategy_path, "or load a saved strategy TSV");
  tail->add_option("--exclude-user", exclude_user);
  tail->add_option("--mc", mc_samples, "also estimate by Monte-Carlo with this many samples");
  add_seed(tail);

  CLI11_PARSE(app, argc, argv);

  try {
    revmax::RunOptions options;
    options.perms = perms;
    options.seed = seed;
    if (!cutoffs_str.empty()) options.cutoffs = parse_cutoffs(cutoffs_str);
    if (!ratings_path.empty()) options.ratings = revmax::load_ratings(ratings_path);

    if (solve->parsed() || compare->parsed() || scaling->parsed() || tail->parsed()) {
      if (!seed_given) std::cout << "# seed\t" << seed << "\n";
    }

    if (solve->parsed()) {
      const revmax::Instance inst = revmax::load_instance(instance_path);
      log_info("loaded " + std::to_string(inst.entries().size()) + " positive triples");
      const revmax::SolveReport report = revmax::run_algorithm(inst, algo, options);
      emit_report(report, emit_histogram);
      if (!out_path.empty()) save_strategy(report.strategy, out_path);
    } else if (compare->parsed()) {
      const revmax::Instance inst = revmax::load_instance(instance_path);
      const auto names = split_csv(algos_csv);
      const revmax::CompareTable table =
          revmax::compare_algorithms(inst, names, options, parallel);
      std::cout << "# instance_fingerprint\t" << std::hex << table.instance_fingerprint
                << std::dec << "\n";
      std::cout << "algo\texpected_revenue\truntime_ms\tselections\trecomputations\n";
      for (const auto& row : table.rows)
        std::cout << row.algorithm << "\t" << row.expected_revenue << "\t" << row.runtime_ms
                  << "\t" << row.selections << "\t" << row.recomputations << "\n";
      if (emit_histogram) {
        for (const auto& report : table.reports) {
          std::cout << "# histogram\t" << report.algorithm << "\n";
          std::cout << "repeats\tpairs\tpercent\n";
          for (const auto& row : revmax::normalized_histogram(report))
            std::cout << row.repeats << "\t" << row.pairs << "\t" << row.percent << "\n";
        }
      }
    } else if (gen->parsed()) {
      const revmax::SynthConfig cfg =
          parse_synth_flags(users, items, per_user, horizon, classes, k, cap_str, beta,
                            price_range, adoption_sigma, seed);
      const revmax::Instance inst = revmax::generate(cfg);
      revmax::save_instance(inst, out_path);
      std::cout << "triples\tout\n" << inst.entries().size() << "\t" << out_path << "\n";
    } else if (kde->parsed()) {
      std::ifstream in(prices_path);
      if (!in) throw revmax::ParseError("parse error: cannot open " + prices_path);
      std::vector<double> samples;
      double value;
      while (in >> value) samples.push_back(value);
      const auto mode = mode_str == "paper" ? revmax::KdeMode::paper_gaussian
                                            : revmax::KdeMode::mixture;
      const revmax::KdeModel model = revmax::KdeModel::fit(std::move(samples), mode);
      std::cout << "n\tbandwidth\tmu\tsigma\tmode\n";
      std::cout << model.samples.size() << "\t" << model.bandwidth << "\t" << model.mu
                << "\t" << model.sigma << "\t" << mode_str << "\n";
    } else if (build->parsed()) {
      const revmax::Instance base = revmax::load_instance(instance_path);
      const revmax::RatingMap ratings = revmax::load_ratings(ratings_path);
      std::ifstream in(prices_path);
      if (!in) throw revmax::ParseError("parse error: cannot open " + prices_path);
      std::map<revmax::ItemId, std::vector<double>> samples;
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
          throw revmax::ParseError("parse error: expected item,price lines");
        samples[static_cast<revmax::ItemId>(std::stoul(line.substr(0, comma)))].push_back(
            std::stod(line.substr(comma + 1)));
      }
      const auto mode = mode_str == "paper" ? revmax::KdeMode::paper_gaussian
                                            : revmax::KdeMode::mixture;
      std::map<revmax::ItemId, revmax::KdeModel> models;
      for (auto& [item, prices] : samples)
        models.emplace(item, revmax::KdeModel::fit(std::move(prices), mode));

      std::vector<revmax::AdoptionEntry> adoption;
      for (const auto& [key, rating] : ratings) {
        const auto u = static_cast<revmax::UserId>(key >> 32);
        const auto i = static_cast<revmax::ItemId>(key & 0xffffffffu);
        auto model = models.find(i);
        if (model == models.end())
          throw std::invalid_argument("no price samples for rated item " +
                                      std::to_string(i));
        for (revmax::TimeStep t = 1; t <= base.horizon(); ++t) {
          const double tail = revmax::valuation_tail(model->second, base.price(i, t));
          const double q = revmax::primitive_adoption(rating, rmax, tail);
          if (q > 0.0) adoption.push_back({u, i, t, q});
        }
      }
      const revmax::Instance rebuilt =
          revmax::Instance::from_parts(base.num_users(), base.horizon(), base.display_k(),
                                       base.items(), std::move(adoption));
      revmax::save_instance(rebuilt, out_path);
      std::cout << "triples\tout\n" << rebuilt.entries().size() << "\t" << out_path << "\n";
    } else if (scaling->parsed()) {
      revmax::SynthConfig base;
      base.num_items = items;
      base.items_per_user = per_user;
      base.horizon = horizon;
      base.num_classes = classes;
      base.display_k = k;
      base.seed = seed;
      std::vector<std::uint64_t> sizes;
      for (const auto& s : split_csv(sizes_csv)) sizes.push_back(std::stoull(s));
      std::cout << "triples\tseconds\n";
      for (const auto& row : revmax::scaling_run(sizes, base))
        std::cout << row.triples << "\t" << row.seconds << "\n";
    } else if (tail->parsed()) {
      const revmax::Instance inst = revmax::load_instance(instance_path);
      revmax::Strategy strategy =
          strategy_path.empty()
              ? revmax::run_algorithm(inst, algo, options).strategy
              : load_strategy(inst, strategy_path);
      const auto xu = exclude_user < 0 ? inst.num_users()  // excludes nobody
                                       : static_cast<revmax::UserId>(exclude_user);
      const auto exact = revmax::capacity_tail_exact(strategy, item_id, time_step, xu);
      std::cout << "method\tvalue\tsamples\tstd_error\n";
      std::cout << "exact-dp\t" << exact.value << "\t0\t0\n";
      if (mc_samples > 0) {
        const auto mc =
            revmax::capacity_tail_mc(strategy, item_id, time_step, xu, mc_samples, seed);
        std::cout << "monte-carlo\t" << mc.value << "\t" << mc.samples << "\t"
                  << mc.std_error << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error\t" << e.what() << "\n";
    return 1;
  }
  return 0;
}
