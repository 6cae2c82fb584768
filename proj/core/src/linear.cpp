#include "interprisk/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "interprisk/metrics.hpp"

namespace interprisk {

namespace {

std::vector<std::size_t> all_rows(const Dataset& data, std::span<const std::size_t> rows) {
  if (!rows.empty()) return {rows.begin(), rows.end()};
  std::vector<std::size_t> out(data.rows());
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

}  // namespace

Standardization standardize_fit(const Dataset& data, std::span<const std::size_t> rows_in) {
  const auto rows = all_rows(data, rows_in);
  if (rows.empty()) throw DataError("empty dataset");
  Standardization st;
  for (std::size_t col : data.schema().indices_with_role(ColumnRole::kFeature)) {
    const auto& spec = data.schema().column(col);
    const auto cells = data.column(col);
    if (spec.kind == ColumnKind::kCategorical) {
      for (const auto& label : spec.categories) {
        st.features.push_back({spec.name + "=" + label, spec.name, ColumnKind::kCategorical, label, 0.0, 1.0});
      }
      continue;
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (auto r : rows) {
      if (is_missing(cells[r])) continue;
      sum += cells[r];
      ++count;
    }
    if (count == 0) {
      st.warnings.push_back("feature '" + spec.name + "' is entirely missing; excluded");
      continue;
    }
    const double mean = sum / static_cast<double>(count);
    double ss = 0.0;
    for (auto r : rows) {
      if (is_missing(cells[r])) continue;
      ss += (cells[r] - mean) * (cells[r] - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(count));
    if (!(sd > 0)) {
      st.warnings.push_back("feature '" + spec.name + "' has zero variance; excluded");
      continue;
    }
    st.features.push_back({spec.name, spec.name, ColumnKind::kNumeric, "", mean, sd});
  }
  return st;
}

std::vector<std::vector<double>> design_matrix(const Standardization& st, const Dataset& data) {
  const std::size_t n = data.rows();
  std::vector<std::vector<double>> x(st.width(), std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < st.width(); ++j) {
    const auto& f = st.features[j];
    const auto col = data.schema().find(f.source);
    if (!col) throw ConfigError("dataset has no column '" + f.source + "'");
    const auto& spec = data.schema().column(*col);
    if (spec.kind != f.kind) throw ConfigError("column '" + f.source + "' kind differs from the model's");
    const auto cells = data.column(*col);
    if (f.kind == ColumnKind::kNumeric) {
      for (std::size_t r = 0; r < n; ++r) x[j][r] = is_missing(cells[r]) ? 0.0 : (cells[r] - f.mean) / f.stddev;
    } else {
      const int k = spec.category_index(f.category);
      if (k < 0) continue;
      for (std::size_t r = 0; r < n; ++r) x[j][r] = cells[r] == static_cast<double>(k) ? 1.0 : 0.0;
    }
  }
  return x;
}

LinearModel train_logistic_l1(const Standardization& st, const std::vector<std::vector<double>>& x,
                              std::span<const std::uint8_t> y, double l1, const LinearOptions& options,
                              const LinearModel* warm) {
  if (!(l1 >= 0) || !std::isfinite(l1)) throw ConfigError("l1_strength must be a finite value >= 0");
  const std::size_t n = y.size();
  const std::size_t p = st.width();
  if (n == 0) throw DataError("empty dataset");
  const auto positives = std::count(y.begin(), y.end(), std::uint8_t{1});
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(n)) throw DataError("single-class outcome");
  const double inv_n = 1.0 / static_cast<double>(n);

  LinearModel m;
  m.standardization = st;
  m.l1_strength = l1;
  m.coefficients.assign(p, 0.0);
  m.intercept = logit(static_cast<double>(positives) * inv_n);
  if (warm && warm->coefficients.size() == p) {
    m.coefficients = warm->coefficients;
    m.intercept = warm->intercept;
  }

  std::vector<double> eta(n);
  auto compute_eta = [&](const std::vector<double>& beta, double b0) {
    std::fill(eta.begin(), eta.end(), b0);
    for (std::size_t j = 0; j < p; ++j) {
      if (beta[j] == 0.0) continue;
      const auto& col = x[j];
      for (std::size_t i = 0; i < n; ++i) eta[i] += beta[j] * col[i];
    }
  };
  auto objective = [&](const std::vector<double>& beta) {
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) loss += softplus(eta[i]) - (y[i] ? eta[i] : 0.0);
    double pen = 0.0;
    for (double b : beta) pen += std::abs(b);
    return loss * inv_n + l1 * pen;
  };

  compute_eta(m.coefficients, m.intercept);
  double current = objective(m.coefficients);
  std::vector<double> w(n), r(n), a(p);
  int sweeps = 0;
  bool converged = false;

  while (sweeps < options.max_sweeps) {
    // Quadratic approximation at the current iterate.
    for (std::size_t i = 0; i < n; ++i) {
      const double pr = sigmoid(eta[i]);
      w[i] = std::max(pr * (1.0 - pr), 1e-5);
      r[i] = (y[i] - pr) / w[i];  // working response minus eta
    }
    double wsum = 0.0;
    for (double v : w) wsum += v;
    for (std::size_t j = 0; j < p; ++j) {
      double s = 0.0;
      const auto& col = x[j];
      for (std::size_t i = 0; i < n; ++i) s += w[i] * col[i] * col[i];
      a[j] = s * inv_n;
    }

    std::vector<double> beta = m.coefficients;
    double b0 = m.intercept;
    bool inner_done = false;
    while (!inner_done && sweeps < options.max_sweeps) {
      ++sweeps;
      double max_change = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        if (a[j] <= 0.0) {
          beta[j] = 0.0;
          continue;
        }
        const auto& col = x[j];
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) c += w[i] * col[i] * r[i];
        c = c * inv_n + a[j] * beta[j];
        const double next = soft_threshold(c, l1) / a[j];
        const double d = next - beta[j];
        if (d != 0.0) {
          for (std::size_t i = 0; i < n; ++i) r[i] -= d * col[i];
          beta[j] = next;
          max_change = std::max(max_change, std::abs(d));
        }
      }
      double wr = 0.0;
      for (std::size_t i = 0; i < n; ++i) wr += w[i] * r[i];
      const double d0 = wr / wsum;
      if (d0 != 0.0) {
        for (auto& v : r) v -= d0;
        b0 += d0;
        max_change = std::max(max_change, std::abs(d0));
      }
      inner_done = max_change < options.tolerance;
    }

    // Step from the old iterate towards the inner solution, halving until
    // the true objective does not increase.
    const std::vector<double> old_beta = m.coefficients;
    const double old_b0 = m.intercept;
    double t = 1.0;
    std::vector<double> trial(p);
    double trial_b0 = 0.0, trial_obj = 0.0;
    for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
      for (std::size_t j = 0; j < p; ++j) trial[j] = old_beta[j] + t * (beta[j] - old_beta[j]);
      trial_b0 = old_b0 + t * (b0 - old_b0);
      compute_eta(trial, trial_b0);
      trial_obj = objective(trial);
      if (trial_obj <= current + 1e-15 * std::abs(current)) break;
    }
    if (!(trial_obj <= current + 1e-15 * std::abs(current))) {
      compute_eta(m.coefficients, m.intercept);
      converged = inner_done;
      break;
    }
    double step = std::abs(trial_b0 - old_b0);
    for (std::size_t j = 0; j < p; ++j) step = std::max(step, std::abs(trial[j] - old_beta[j]));
    m.coefficients = trial;
    m.intercept = trial_b0;
    current = trial_obj;
    if (inner_done && step < options.tolerance) {
      converged = true;
      break;
    }
  }
  m.sweeps = sweeps;
  m.converged = converged;
  m.nonzero_count = static_cast<std::size_t>(
      std::count_if(m.coefficients.begin(), m.coefficients.end(), [](double b) { return b != 0.0; }));
  return m;
}

LinearModel train_logistic_l1(const Dataset& data, double l1, const LinearOptions& options, const LinearModel* warm) {
  const Standardization st = warm ? warm->standardization : standardize_fit(data);
  const auto x = design_matrix(st, data);
  auto m = train_logistic_l1(st, x, data.outcome(), l1, options, warm);
  m.standardization.warnings = st.warnings;
  return m;
}

std::vector<double> predict_logit(const LinearModel& model, const Dataset& data) {
  const auto x = design_matrix(model.standardization, data);
  std::vector<double> z(data.rows(), model.intercept);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double b = model.coefficients[j];
    if (b == 0.0) continue;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += b * x[j][i];
  }
  return z;
}

std::vector<double> predict_proba(const LinearModel& model, const Dataset& data) {
  auto z = predict_logit(model, data);
  for (auto& v : z) v = sigmoid(v);
  return z;
}

std::vector<PathPoint> sparsity_path(const Dataset& train, const Dataset& validate, std::span<const double> strengths,
                                     const LinearOptions& options) {
  if (strengths.empty()) throw ConfigError("sparsity_path: no strengths given");
  std::vector<double> order(strengths.begin(), strengths.end());
  std::sort(order.begin(), order.end(), std::greater<>());
  const Standardization st = standardize_fit(train);
  const auto x = design_matrix(st, train);
  const auto xv = design_matrix(st, validate);

  std::vector<PathPoint> out;
  std::optional<LinearModel> previous;
  for (double s : order) {
    PathPoint pt;
    pt.l1_strength = s;
    try {
      auto m = train_logistic_l1(st, x, train.outcome(), s, options, previous ? &*previous : nullptr);
      std::vector<double> z(validate.rows(), m.intercept);
      for (std::size_t j = 0; j < xv.size(); ++j) {
        for (std::size_t i = 0; i < z.size(); ++i) z[i] += m.coefficients[j] * xv[j][i];
      }
      pt.nonzero_count = m.nonzero_count;
      pt.converged = m.converged;
      pt.validation_auc = auc(z, validate.outcome());
      previous = std::move(m);
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
    out.push_back(pt);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace interprisk
