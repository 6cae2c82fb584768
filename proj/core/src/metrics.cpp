#include "interprisk/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "interprisk/common.hpp"

namespace interprisk {

namespace {

void check_inputs(std::span<const double> scores, std::span<const std::uint8_t> labels,
                  std::int64_t& positives) {
  if (scores.size() != labels.size()) throw DataError("scores and labels differ in length");
  positives = 0;
  for (auto y : labels) positives += y ? 1 : 0;
  if (positives == 0 || positives == static_cast<std::int64_t>(labels.size())) {
    throw DataError("single-class outcome");
  }
}

}  // namespace

double auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  std::int64_t pos = 0;
  check_inputs(scores, labels, pos);
  const auto n = static_cast<std::int64_t>(scores.size());
  const std::int64_t neg = n - pos;

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Twice the rank sum of the positives, so tied (half-integer) ranks stay
  // exact in integer arithmetic.
  std::int64_t twice_rank_sum = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    // 1-based ranks i+1..j share the average (i+1+j)/2.
    const auto twice_avg = static_cast<std::int64_t>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]]) twice_rank_sum += twice_avg;
    }
    i = j;
  }
  const std::int64_t twice_u = twice_rank_sum - pos * (pos + 1);
  return static_cast<double>(twice_u) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

GainsCurve cumulative_gains(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  std::int64_t pos = 0;
  check_inputs(scores, labels, pos);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  GainsCurve curve;
  curve.points.reserve(order.size() + 1);
  curve.points.push_back({0.0, 0.0});
  const double n = static_cast<double>(order.size());
  std::int64_t captured = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    captured += labels[order[k]] ? 1 : 0;
    curve.points.push_back({static_cast<double>(k + 1) / n, static_cast<double>(captured) / static_cast<double>(pos)});
  }
  curve.points.back() = {1.0, 1.0};
  return curve;
}

double GainsCurve::population_for_capture(double target) const {
  for (const auto& p : points) {
    if (p.captured_fraction >= target) return p.population_fraction;
  }
  return 1.0;
}

}  // namespace interprisk
