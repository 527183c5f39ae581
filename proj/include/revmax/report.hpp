#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>

#include "revmax/model.hpp"

namespace revmax {

struct SolveReport {
  std::string algorithm;
  Strategy strategy;
  double expected_revenue = 0.0;
  double runtime_ms = 0.0;
  std::uint64_t selections = 0;       // committed triples
  std::uint64_t recomputations = 0;   // marginal-revenue evaluations performed
  // repeat count -> number of (user,item) pairs recommended that many times
  std::map<std::uint32_t, std::uint64_t> repeat_histogram;
  // R-RevMax objective; NaN for plain RevMax solvers
  double relaxed_objective = std::numeric_limits<double>::quiet_NaN();
};

std::map<std::uint32_t, std::uint64_t> compute_repeat_histogram(const Strategy& s);

struct HistogramRow {
  std::uint32_t repeats;
  std::uint64_t pairs;
  double percent;
};
// Fig.-5 style rows: percentage of (user,item) pairs per repeat-count bucket
std::vector<HistogramRow> normalized_histogram(const SolveReport& report);

}  // namespace revmax
