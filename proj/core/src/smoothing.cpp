#include "interprisk/smoothing.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "interprisk/metrics.hpp"

namespace interprisk {

namespace {

// Symmetric positive definite band matrix with half-bandwidth 2, stored by
// diagonals; solved by an in-place LDL^T factorization.
struct Pentadiagonal {
  std::vector<double> d0, d1, d2;  // main, first and second superdiagonal

  explicit Pentadiagonal(std::size_t m) : d0(m, 0.0), d1(m, 0.0), d2(m, 0.0) {}

  std::vector<double> solve(std::vector<double> b) const {
    const std::size_t m = d0.size();
    std::vector<double> d(m), l1(m, 0.0), l2(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      double di = d0[i];
      if (i >= 1) di -= l1[i - 1] * l1[i - 1] * d[i - 1];
      if (i >= 2) di -= l2[i - 2] * l2[i - 2] * d[i - 2];
      if (!(di > 0)) throw DataError("smoothing: system is not positive definite");
      d[i] = di;
      if (i + 1 < m) {
        double v = d1[i];
        if (i >= 1) v -= l1[i - 1] * l2[i - 1] * d[i - 1];
        l1[i] = v / di;
      }
      if (i + 2 < m) l2[i] = d2[i] / di;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (i >= 1) b[i] -= l1[i - 1] * b[i - 1];
      if (i >= 2) b[i] -= l2[i - 2] * b[i - 2];
    }
    for (std::size_t i = 0; i < m; ++i) b[i] /= d[i];
    for (std::size_t k = m; k-- > 0;) {
      if (k + 1 < m) b[k] -= l1[k] * b[k + 1];
      if (k + 2 < m) b[k] -= l2[k] * b[k + 2];
    }
    return b;
  }
};

// Q^T v for the second-divided-difference operator of the Reinsch form.
std::vector<double> qt_times(std::span<const double> h, std::span<const double> v) {
  const std::size_t m = v.size() - 2;
  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    out[j] = (v[j + 2] - v[j + 1]) / h[j + 1] - (v[j + 1] - v[j]) / h[j];
  }
  return out;
}

Pentadiagonal r_matrix(std::span<const double> h) {
  const std::size_t m = h.size() - 1;
  Pentadiagonal r(m);
  for (std::size_t j = 0; j < m; ++j) {
    r.d0[j] = (h[j] + h[j + 1]) / 3.0;
    if (j + 1 < m) r.d1[j] = h[j + 1] / 6.0;
  }
  return r;
}

std::vector<double> spacings(std::span<const double> x) {
  if (x.size() < 3) throw ConfigError("smoothing spline needs at least 3 points");
  std::vector<double> h(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    h[i] = x[i + 1] - x[i];
    if (!(h[i] > 0)) throw ConfigError("smoothing spline abscissae must be strictly increasing");
  }
  return h;
}

}  // namespace

std::vector<double> smoothing_spline(std::span<const double> x, std::span<const double> y,
                                     std::span<const double> w, double lambda) {
  if (!(lambda >= 0) || !std::isfinite(lambda)) throw ConfigError("lambda must be a finite value >= 0");
  if (y.size() != x.size() || w.size() != x.size()) throw ConfigError("smoothing spline: size mismatch");
  const auto h = spacings(x);
  const std::size_t n = x.size();
  const std::size_t m = n - 2;
  for (double v : w) {
    if (!(v > 0)) throw ConfigError("smoothing spline weights must be > 0");
  }

  // (R + lambda Q^T W^-1 Q) gamma = Q^T y;  f = y - lambda W^-1 Q gamma.
  Pentadiagonal a = r_matrix(h);
  if (lambda > 0) {
    for (std::size_t j = 0; j < m; ++j) {
      const double q0 = 1.0 / h[j], q1 = -1.0 / h[j] - 1.0 / h[j + 1], q2 = 1.0 / h[j + 1];
      a.d0[j] += lambda * (q0 * q0 / w[j] + q1 * q1 / w[j + 1] + q2 * q2 / w[j + 2]);
      if (j + 1 < m) {
        const double p0 = 1.0 / h[j + 1], p1 = -1.0 / h[j + 1] - 1.0 / h[j + 2];
        a.d1[j] += lambda * (q1 * p0 / w[j + 1] + q2 * p1 / w[j + 2]);
      }
      if (j + 2 < m) {
        const double r0 = 1.0 / h[j + 2];
        a.d2[j] += lambda * (q2 * r0 / w[j + 2]);
      }
    }
  }
  const auto gamma = a.solve(qt_times(h, y));
  std::vector<double> f(y.begin(), y.end());
  if (lambda == 0) return f;
  for (std::size_t j = 0; j < m; ++j) {
    f[j] -= lambda * gamma[j] / h[j] / w[j];
    f[j + 1] -= lambda * gamma[j] * (-1.0 / h[j] - 1.0 / h[j + 1]) / w[j + 1];
    f[j + 2] -= lambda * gamma[j] / h[j + 1] / w[j + 2];
  }
  return f;
}

double spline_roughness(std::span<const double> x, std::span<const double> f) {
  const auto h = spacings(x);
  const auto qtf = qt_times(h, f);
  const auto gamma = r_matrix(h).solve(qtf);
  double total = 0.0;
  for (std::size_t j = 0; j < gamma.size(); ++j) total += gamma[j] * qtf[j];
  return std::max(total, 0.0);
}

namespace {

struct Abscissae {
  std::vector<double> x, w;
};

Abscissae prepare(const FeatureBins& bins, std::span<const double> bin_weights) {
  if (bins.kind != ColumnKind::kNumeric) throw ConfigError("smoothing applies to numeric shapes only");
  const int nb = bins.regular_bins();
  if (nb < 4) throw ConfigError("smoothing '" + bins.name + "' needs at least 4 bins, has " + std::to_string(nb));
  Abscissae a;
  for (int b = 0; b < nb; ++b) a.x.push_back(bins.midpoint(b));
  const double lo = a.x.front(), span = a.x.back() - a.x.front();
  for (auto& v : a.x) v = (v - lo) / span;
  double total = 0.0;
  for (int b = 0; b < nb; ++b) {
    const double v = static_cast<std::size_t>(b) < bin_weights.size() ? bin_weights[static_cast<std::size_t>(b)] : 1.0;
    a.w.push_back(v);
    total += v;
  }
  const double mean = total / nb;
  for (auto& v : a.w) v = mean > 0 ? std::max(v / mean, 1e-6) : 1.0;
  return a;
}

}  // namespace

double shape_roughness(const FeatureBins& bins, std::span<const double> scores) {
  const auto a = prepare(bins, {});
  return spline_roughness(a.x, scores.first(a.x.size()));
}

SmoothedShape smooth_shape(const ShapeFunction& shape, const FeatureBins& bins, double lambda) {
  const auto a = prepare(bins, shape.bin_weights);
  const std::size_t nb = a.x.size();
  if (shape.scores.size() != nb + 1) throw ConfigError("shape '" + shape.feature + "' does not match its bins");
  SmoothedShape out;
  out.feature = shape.feature;
  out.lambda = lambda;
  out.raw_scores = shape.scores;
  const std::span<const double> raw(shape.scores.data(), nb);
  auto fitted = smoothing_spline(a.x, raw, a.w, lambda);
  out.roughness_before = spline_roughness(a.x, raw);
  out.roughness_after = spline_roughness(a.x, fitted);
  fitted.push_back(shape.scores.back());

  ShapeFunction centered{shape.feature, fitted, shape.bin_weights};
  out.shift = centered.weighted_mean();
  for (auto& s : fitted) s -= out.shift;
  out.scores = std::move(fitted);
  return out;
}

std::string smooth_plan_to_json(const SmoothPlan& plan) {
  nlohmann::json j;
  j["lambdas"] = nlohmann::json::object();
  for (const auto& [k, v] : plan.lambdas) j["lambdas"][k] = v;
  return j.dump(2) + "\n";
}

SmoothPlan smooth_plan_from_json(std::string_view text) {
  SmoothPlan plan;
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& lam = j.contains("lambdas") ? j.at("lambdas") : j;
    if (!lam.is_object()) throw ConfigError("smoothing plan must map features to lambdas");
    for (auto it = lam.begin(); it != lam.end(); ++it) {
      const double v = it.value().get<double>();
      if (!(v >= 0)) throw ConfigError("lambda for '" + it.key() + "' must be >= 0");
      plan.lambdas[it.key()] = v;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("smoothing plan: ") + e.what());
  }
  return plan;
}

SmoothResult smooth_model(const EbmModel& model, const SmoothPlan& plan) {
  SmoothResult result;
  result.model = model;
  for (const auto& [feature, lambda] : plan.lambdas) {
    try {
      const auto it = std::find_if(model.mains.begin(), model.mains.end(),
                                   [&](const ShapeFunction& s) { return s.feature == feature; });
      if (it == model.mains.end()) throw ConfigError("model has no feature '" + feature + "'");
      const auto f = static_cast<std::size_t>(it - model.mains.begin());
      auto smoothed = smooth_shape(*it, model.layout[f], lambda);
      auto& shape = result.model.mains[f];
      shape.scores = smoothed.scores;
      result.model.intercept += smoothed.shift;
      double total = 0.0, weight = 0.0;
      for (std::size_t b = 0; b < shape.scores.size(); ++b) {
        total += shape.bin_weights[b] * std::abs(shape.scores[b]);
        weight += shape.bin_weights[b];
      }
      if (f < result.model.importances.size() && weight > 0) result.model.importances[f] = total / weight;
      result.shapes.push_back(std::move(smoothed));
    } catch (const std::exception& e) {
      result.errors[feature] = e.what();
    }
  }
  return result;
}

std::vector<LambdaSweepPoint> lambda_sweep(const EbmModel& model, const std::vector<std::string>& features,
                                           std::span<const double> lambdas, const BinnedDataset& data) {
  std::vector<LambdaSweepPoint> out;
  for (double lambda : lambdas) {
    SmoothPlan plan;
    for (const auto& f : features) plan.lambdas[f] = lambda;
    const auto res = smooth_model(model, plan);
    if (!res.errors.empty()) {
      throw ConfigError("smoothing '" + res.errors.begin()->first + "': " + res.errors.begin()->second);
    }
    LambdaSweepPoint pt;
    pt.lambda = lambda;
    pt.auc = auc(predict_logit(res.model, data), data.outcome());
    for (const auto& f : features) {
      for (const auto& s : res.shapes) {
        if (s.feature == f) pt.roughness.push_back(s.roughness_after);
      }
    }
    out.push_back(std::move(pt));
  }
  return out;
}

double calibrate_lambda(const EbmModel& model, const std::vector<std::string>& features,
                        std::span<const double> lambdas, const BinnedDataset& data, double max_drop) {
  const double base = auc(predict_logit(model, data), data.outcome());
  const auto sweep = lambda_sweep(model, features, lambdas, data);
  double best = 0.0;
  for (const auto& pt : sweep) {
    if (pt.auc >= base - max_drop) best = std::max(best, pt.lambda);
  }
  return best;
}

}  // namespace interprisk
