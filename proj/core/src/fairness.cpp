#include "interprisk/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <nlohmann/json.hpp>

namespace interprisk {

std::array<double, 4> ConfusionMatrix::normalized() const {
  const double t = total();
  if (!(t > 0)) return {0, 0, 0, 0};
  return {tp / t, fp / t, tn / t, fn / t};
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
  tp += o.tp;
  fp += o.fp;
  tn += o.tn;
  fn += o.fn;
  return *this;
}

namespace {

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw ConfigError("scores and labels differ in length");
}

void tally(ConfusionMatrix& cm, bool predicted, std::uint8_t label) {
  if (label) {
    (predicted ? cm.tp : cm.fn) += 1;
  } else {
    (predicted ? cm.fp : cm.tn) += 1;
  }
}

ConfusionMatrix mix(const ConfusionMatrix& a, const ConfusionMatrix& b, double p) {
  return {p * a.tp + (1 - p) * b.tp, p * a.fp + (1 - p) * b.fp, p * a.tn + (1 - p) * b.tn,
          p * a.fn + (1 - p) * b.fn};
}

}  // namespace

ConfusionMatrix confusion_at(std::span<const double> scores, std::span<const std::uint8_t> labels,
                             double threshold) {
  check_sizes(scores.size(), labels.size());
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < scores.size(); ++i) tally(cm, scores[i] > threshold, labels[i]);
  return cm;
}

TprThreshold threshold_for_tpr(std::span<const double> scores, std::span<const std::uint8_t> labels,
                               double target_tpr) {
  check_sizes(scores.size(), labels.size());
  if (!(target_tpr > 0 && target_tpr <= 1)) throw ConfigError("target TPR must be in (0, 1]");
  std::vector<double> pos;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i]) pos.push_back(scores[i]);
  }
  if (pos.empty()) throw DataError("threshold_for_tpr: no positive labels");
  std::sort(pos.begin(), pos.end(), std::greater<>());
  const double need = target_tpr * static_cast<double>(pos.size());
  auto k = static_cast<std::size_t>(std::ceil(need - 1e-12));
  k = std::clamp<std::size_t>(k, 1, pos.size());
  TprThreshold out;
  out.threshold = std::nextafter(pos[k - 1], -std::numeric_limits<double>::infinity());
  std::size_t captured = 0;
  for (double s : pos) captured += s > out.threshold ? 1 : 0;
  out.achieved_tpr = static_cast<double>(captured) / static_cast<double>(pos.size());
  return out;
}

const GroupThreshold& ThresholdPolicy::find(std::string_view group) const {
  for (const auto& g : groups) {
    if (g.group == group) return g;
  }
  throw ConfigError("group '" + std::string(group) + "' is not in the policy");
}

ThresholdPolicy uniform_policy(const std::vector<std::string>& groups, double threshold) {
  ThresholdPolicy p;
  for (const auto& g : groups) p.groups.push_back({g, threshold, threshold, 1.0});
  return p;
}

std::string policy_to_json(const ThresholdPolicy& policy) {
  nlohmann::json j;
  j["format"] = "interprisk-policy";
  j["version"] = 1;
  j["seed"] = policy.seed;
  j["groups"] = nlohmann::json::array();
  for (const auto& g : policy.groups) {
    j["groups"].push_back({{"group", g.group}, {"t_low", g.t_low}, {"t_high", g.t_high}, {"p", g.p}});
  }
  return j.dump(2) + "\n";
}

ThresholdPolicy policy_from_json(std::string_view text) {
  ThresholdPolicy p;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != "interprisk-policy") throw ConfigError("not a threshold policy document");
    if (j.at("version").get<int>() != 1) throw ConfigError("unsupported policy version");
    p.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& g : j.at("groups")) {
      GroupThreshold t{g.at("group").get<std::string>(), g.at("t_low").get<double>(), g.at("t_high").get<double>(),
                       g.at("p").get<double>()};
      if (!(t.t_low <= t.t_high)) throw ConfigError("policy for '" + t.group + "': t_low > t_high");
      if (!(t.p >= 0 && t.p <= 1)) throw ConfigError("policy for '" + t.group + "': p outside [0,1]");
      p.groups.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("policy: ") + e.what());
  }
  return p;
}

GroupReport group_report(std::span<const double> scores, std::span<const std::uint8_t> labels,
                         std::span<const std::string> groups, const ThresholdPolicy& policy, ReportMode mode) {
  check_sizes(scores.size(), labels.size());
  check_sizes(scores.size(), groups.size());
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t g = 0; g < policy.groups.size(); ++g) index[policy.groups[g].group] = g;

  std::vector<ConfusionMatrix> low(policy.groups.size()), high(policy.groups.size()), sampled(policy.groups.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto it = index.find(groups[i]);
    if (it == index.end()) throw ConfigError("group '" + groups[i] + "' is not in the policy");
    const auto& t = policy.groups[it->second];
    if (mode == ReportMode::kSampled) {
      const double thr = keyed_uniform(policy.seed, i) < t.p ? t.t_low : t.t_high;
      tally(sampled[it->second], scores[i] > thr, labels[i]);
    } else {
      tally(low[it->second], scores[i] > t.t_low, labels[i]);
      tally(high[it->second], scores[i] > t.t_high, labels[i]);
    }
  }

  GroupReport report;
  for (std::size_t g = 0; g < policy.groups.size(); ++g) {
    GroupMetrics m;
    m.group = policy.groups[g].group;
    m.matrix = mode == ReportMode::kSampled ? sampled[g] : mix(low[g], high[g], policy.groups[g].p);
    m.tpr = m.matrix.tpr();
    m.fpr = m.matrix.fpr();
    m.tnr = m.matrix.tnr();
    report.overall += m.matrix;
    report.groups.push_back(std::move(m));
  }
  report.accuracy = report.overall.accuracy();
  report.balanced_accuracy = report.overall.balanced_accuracy();
  report.tpr = report.overall.tpr();
  report.fpr = report.overall.fpr();
  return report;
}

namespace {

// Deterministic operating points of one group, from "nothing positive" to
// "everything positive". thresholds[k] yields tp[k]/fp[k].
struct GroupRoc {
  std::string name;
  std::vector<double> thresholds;
  std::vector<double> tp, fp;
  double positives = 0, negatives = 0;

  double fpr(std::size_t k) const { return fp[k] / negatives; }
};

GroupRoc build_roc(std::string name, std::vector<std::pair<double, std::uint8_t>> rows) {
  GroupRoc roc;
  roc.name = std::move(name);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (const auto& r : rows) (r.second ? roc.positives : roc.negatives) += 1;
  if (roc.positives == 0 || roc.negatives == 0) {
    throw DataError("group '" + roc.name + "' has a single class");
  }
  double tp = 0, fp = 0;
  roc.thresholds.push_back(rows.front().first);
  roc.tp.push_back(0);
  roc.fp.push_back(0);
  for (std::size_t i = 0; i < rows.size();) {
    const double v = rows[i].first;
    while (i < rows.size() && rows[i].first == v) {
      (rows[i].second ? tp : fp) += 1;
      ++i;
    }
    roc.thresholds.push_back(i < rows.size() ? rows[i].first
                                             : std::nextafter(v, -std::numeric_limits<double>::infinity()));
    roc.tp.push_back(tp);
    roc.fp.push_back(fp);
  }
  return roc;
}

struct Operating {
  GroupThreshold threshold;
  double tp = 0, fp = 0;
};

// Exact mixture of the two operating points bracketing target FPR f.
Operating randomized_at(const GroupRoc& roc, double f) {
  const auto it = std::lower_bound(roc.fp.begin(), roc.fp.end(), f * roc.negatives);
  auto k = static_cast<std::size_t>(it - roc.fp.begin());
  k = std::min(k, roc.fp.size() - 1);
  Operating op;
  op.threshold.group = roc.name;
  if (roc.fpr(k) == f || k == 0) {
    op.threshold.t_low = op.threshold.t_high = roc.thresholds[k];
    op.threshold.p = 1.0;
    op.tp = roc.tp[k];
    op.fp = roc.fp[k];
    return op;
  }
  const double lo = roc.fpr(k - 1), hi = roc.fpr(k);
  const double p = std::clamp((f - lo) / (hi - lo), 0.0, 1.0);
  op.threshold.t_low = roc.thresholds[k];
  op.threshold.t_high = roc.thresholds[k - 1];
  op.threshold.p = p;
  op.tp = p * roc.tp[k] + (1 - p) * roc.tp[k - 1];
  op.fp = f * roc.negatives;
  return op;
}

Operating nearest_at(const GroupRoc& roc, double f) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < roc.fp.size(); ++k) {
    if (std::abs(roc.fpr(k) - f) < std::abs(roc.fpr(best) - f)) best = k;
  }
  Operating op;
  op.threshold = {roc.name, roc.thresholds[best], roc.thresholds[best], 1.0};
  op.tp = roc.tp[best];
  op.fp = roc.fp[best];
  return op;
}

}  // namespace

EqualizeResult equalize_fpr(std::span<const double> scores, std::span<const std::uint8_t> labels,
                            std::span<const std::string> groups, const EqualizeOptions& options) {
  check_sizes(scores.size(), labels.size());
  check_sizes(scores.size(), groups.size());
  if (options.grid < 1 || options.refine < 1) throw ConfigError("equalize_fpr: grid and refine must be >= 1");
  if (scores.empty()) throw DataError("empty dataset");

  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<double, std::uint8_t>>, std::less<>> by_group;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    auto [it, inserted] = by_group.try_emplace(groups[i]);
    if (inserted) order.push_back(groups[i]);
    it->second.emplace_back(scores[i], labels[i]);
  }
  std::vector<GroupRoc> rocs;
  double positives = 0, negatives = 0;
  for (const auto& g : order) {
    rocs.push_back(build_roc(g, std::move(by_group[g])));
    positives += rocs.back().positives;
    negatives += rocs.back().negatives;
  }

  auto evaluate = [&](double f, std::vector<Operating>* ops) {
    double tp = 0, fp = 0;
    for (const auto& roc : rocs) {
      const auto op = options.deterministic ? nearest_at(roc, f) : randomized_at(roc, f);
      tp += op.tp;
      fp += op.fp;
      if (ops) ops->push_back(op);
    }
    return 0.5 * (tp / positives + 1.0 - fp / negatives);
  };

  const double step = 1.0 / (options.grid + 1);
  double best_f = step, best_ba = -1.0;
  for (int k = 1; k <= options.grid; ++k) {
    const double f = k * step;
    const double ba = evaluate(f, nullptr);
    if (ba > best_ba) {
      best_ba = ba;
      best_f = f;
    }
  }
  const double centre = best_f;
  for (int i = -options.refine; i <= options.refine; ++i) {
    const double f = centre + i * step / options.refine;
    if (!(f > 0 && f < 1) || i == 0) continue;
    const double ba = evaluate(f, nullptr);
    if (ba > best_ba) {
      best_ba = ba;
      best_f = f;
    }
  }

  std::vector<Operating> ops;
  EqualizeResult result;
  result.balanced_accuracy = evaluate(best_f, &ops);
  result.target_fpr = best_f;
  result.policy.seed = options.seed;
  double lo = 1.0, hi = 0.0;
  for (std::size_t g = 0; g < ops.size(); ++g) {
    result.policy.groups.push_back(ops[g].threshold);
    const double fpr = ops[g].fp / rocs[g].negatives;
    result.group_fpr.push_back(fpr);
    lo = std::min(lo, fpr);
    hi = std::max(hi, fpr);
  }
  result.fpr_spread = hi - lo;
  if (options.deterministic && result.fpr_spread > 0.01) {
    result.warnings.push_back("deterministic thresholds leave an FPR spread of " + format_double(result.fpr_spread));
  }
  return result;
}

}  // namespace interprisk
