#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "interprisk/common.hpp"

namespace interprisk {

// Counts may be fractional when they are expectations under a randomized
// policy.
struct ConfusionMatrix {
  double tp = 0, fp = 0, tn = 0, fn = 0;

  double total() const { return tp + fp + tn + fn; }
  // {tp, fp, tn, fn} / total.
  std::array<double, 4> normalized() const;
  double tpr() const { return tp + fn > 0 ? tp / (tp + fn) : 0.0; }
  double fpr() const { return fp + tn > 0 ? fp / (fp + tn) : 0.0; }
  double tnr() const { return fp + tn > 0 ? tn / (fp + tn) : 0.0; }
  double accuracy() const { return total() > 0 ? (tp + tn) / total() : 0.0; }
  double balanced_accuracy() const { return 0.5 * (tpr() + tnr()); }

  ConfusionMatrix& operator+=(const ConfusionMatrix& o);
  bool operator==(const ConfusionMatrix&) const = default;
};

// Positive prediction iff score > threshold.
ConfusionMatrix confusion_at(std::span<const double> scores, std::span<const std::uint8_t> labels,
                             double threshold);

struct TprThreshold {
  double threshold = 0.0;
  double achieved_tpr = 0.0;
};

// Largest threshold t with TPR(score > t) >= target_tpr.
TprThreshold threshold_for_tpr(std::span<const double> scores, std::span<const std::uint8_t> labels,
                               double target_tpr);

// A row of group g is scored against t_low with probability p and against
// t_high otherwise; the draw is keyed by (seed, row index).
struct GroupThreshold {
  std::string group;
  double t_low = 0.0;
  double t_high = 0.0;
  double p = 1.0;
  bool operator==(const GroupThreshold&) const = default;
};

struct ThresholdPolicy {
  std::vector<GroupThreshold> groups;
  std::uint64_t seed = 0;

  const GroupThreshold& find(std::string_view group) const;
  bool operator==(const ThresholdPolicy&) const = default;
};

// Same deterministic threshold for every listed group.
ThresholdPolicy uniform_policy(const std::vector<std::string>& groups, double threshold);

std::string policy_to_json(const ThresholdPolicy& policy);
ThresholdPolicy policy_from_json(std::string_view text);

struct GroupMetrics {
  std::string group;
  ConfusionMatrix matrix;
  double tpr = 0, fpr = 0, tnr = 0;
};

struct GroupReport {
  std::vector<GroupMetrics> groups;  // policy order
  ConfusionMatrix overall;
  double accuracy = 0, balanced_accuracy = 0, tpr = 0, fpr = 0;
};

enum class ReportMode {
  kSampled,   // apply the seeded per-row draws
  kExpected,  // mix the two deterministic matrices by p
};

GroupReport group_report(std::span<const double> scores, std::span<const std::uint8_t> labels,
                         std::span<const std::string> groups, const ThresholdPolicy& policy,
                         ReportMode mode = ReportMode::kSampled);

struct EqualizeOptions {
  int grid = 512;       // targets k/(grid+1), k = 1..grid
  int refine = 10;      // finer grid around the best target
  bool deterministic = false;
  std::uint64_t seed = 0;
};

struct EqualizeResult {
  ThresholdPolicy policy;
  double target_fpr = 0.0;
  double balanced_accuracy = 0.0;  // expected, overall
  std::vector<double> group_fpr;   // expected, policy order
  double fpr_spread = 0.0;
  Warnings warnings;
};

// Per-group thresholds with equal expected FPR maximizing overall balanced
// accuracy. Groups are listed in order of first appearance. In
// deterministic mode each group takes the single threshold whose FPR is
// closest to the target and the residual spread is reported.
EqualizeResult equalize_fpr(std::span<const double> scores, std::span<const std::uint8_t> labels,
                            std::span<const std::string> groups, const EqualizeOptions& options = {});

}  // namespace interprisk
