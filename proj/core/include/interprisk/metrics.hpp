#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace interprisk {

// Mann-Whitney AUC; tied positive/negative pairs count one half.
// Throws DataError unless both classes are present.
double auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct GainsPoint {
  double population_fraction = 0.0;
  double captured_fraction = 0.0;
};

// Cumulative gains: rows ranked by descending score (ties keep input order);
// point k covers the first k rows. Starts at (0,0) and ends at (1,1).
struct GainsCurve {
  std::vector<GainsPoint> points;

  // Smallest population fraction whose captured fraction reaches `target`.
  double population_for_capture(double target) const;
};

GainsCurve cumulative_gains(std::span<const double> scores, std::span<const std::uint8_t> labels);

}  // namespace interprisk
