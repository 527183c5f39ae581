#include "revmax/report.hpp"

namespace revmax {

std::map<std::uint32_t, std::uint64_t> compute_repeat_histogram(const Strategy& s) {
  std::map<std::pair<UserId, ItemId>, std::uint32_t> per_pair;
  for (const Triple& z : s.triples()) per_pair[{z.user, z.item}]++;
  std::map<std::uint32_t, std::uint64_t> hist;
  for (const auto& [pair, count] : per_pair) hist[count]++;
  return hist;
}

std::vector<HistogramRow> normalized_histogram(const SolveReport& report) {
  std::uint64_t total = 0;
  for (const auto& [repeats, pairs] : report.repeat_histogram) total += pairs;
  std::vector<HistogramRow> rows;
  for (const auto& [repeats, pairs] : report.repeat_histogram)
    rows.push_back({repeats, pairs,
                    total == 0 ? 0.0 : 100.0 * static_cast<double>(pairs) /
                                           static_cast<double>(total)});
  return rows;
}

}  // namespace revmax
