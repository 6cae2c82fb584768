// Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero
// if any fails. Expensive fixtures (the default-data EBM) are shared between
// criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "interprisk/fairness.hpp"
#include "interprisk/harness.hpp"
#include "interprisk/linear.hpp"
#include "interprisk/metrics.hpp"
#include "interprisk/smoothing.hpp"
#include "interprisk/sparsity.hpp"
#include "interprisk/synth.hpp"

namespace fs = std::filesystem;
using namespace interprisk;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Dataset years_of(const Dataset& d, std::set<int> years) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    if (years.count(d.years()[i])) rows.push_back(i);
  }
  return d.subset(rows);
}

std::vector<double> pick(const std::vector<double>& v, const Dataset& d, int year) {
  std::vector<double> out;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    if (d.years()[i] == year) out.push_back(v[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// 1. AUC against the all-pairs count.

double pairwise_auc(const std::vector<double>& s, const std::vector<std::uint8_t>& y) {
  double wins = 0, pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (!y[i] || y[j]) continue;
      pairs += 1;
      wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  }
  return wins / pairs;
}

Outcome auc_oracle() {
  const auto t0 = Clock::now();
  Rng rng(2024);
  double worst = 0;
  int instances = 0;
  while (instances < 200) {
    const std::size_t n = 2 + rng.below(199);
    std::vector<double> s(n);
    std::vector<std::uint8_t> y(n);
    // Coarse scores force ties.
    const std::uint64_t levels = instances % 3 == 0 ? 4 : (instances % 3 == 1 ? 20 : 1'000'000);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.below(levels)) / static_cast<double>(levels);
      y[i] = rng.uniform() < 0.35;
    }
    if (std::count(y.begin(), y.end(), 1) == 0 || std::count(y.begin(), y.end(), 0) == 0) continue;
    worst = std::max(worst, std::abs(auc(s, y) - pairwise_auc(s, y)));
    ++instances;
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-12 && secs < 5.0, fmt("max |diff| %.3g", worst) + fmt(", %.2f s", secs)};
}

// ---------------------------------------------------------------------------
// Default generator at 50,000 rows per year; EBM with the published
// hyperparameters trained on 2014 and validated on 2015.

struct DefaultFixture {
  SynthConfig config;
  SynthResult synth;
  Dataset train, validate;
  EbmModel model;
  double train_seconds = 0;
};

const DefaultFixture& default_fixture() {
  static const DefaultFixture f = [] {
    DefaultFixture x;
    x.config = default_synth_config();
    x.synth = synthesize(x.config);
    x.train = years_of(x.synth.data, {2014});
    x.validate = years_of(x.synth.data, {2015});
    const auto t0 = Clock::now();
    ModelSpec spec;
    spec.family = ModelFamily::kEbm;
    x.model = std::get<EbmModel>(fit_model(spec, x.train, 1));
    x.train_seconds = seconds_since(t0);
    return x;
  }();
  return f;
}

// 2. predict_logit equals intercept plus the explanation terms.
Outcome additivity() {
  const auto& f = default_fixture();
  const LayoutBinding binding(f.model.layout, f.validate.schema());
  Rng rng(7);
  double worst = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto row = static_cast<std::size_t>(rng.below(f.validate.rows()));
    const auto rec = binding.record(f.validate, row);
    const auto e = local_explanation(f.model, rec);
    double sum = e.intercept;
    for (const auto& t : e.terms) sum += t.contribution;
    worst = std::max(worst, std::abs(predict_logit(f.model, rec) - sum));
  }
  return {worst <= 1e-12, fmt("max |diff| %.3g over 1000 rows", worst)};
}

// 3. EBM validation AUC within 0.02 of the Bayes AUC of the true probabilities.
Outcome synthetic_recovery() {
  const auto t0 = Clock::now();
  const auto& f = default_fixture();
  const double ebm_auc = auc(predict_logit(f.model, f.validate), f.validate.outcome());
  const double bayes = auc(pick(f.synth.true_probability, f.synth.data, 2015), f.validate.outcome());
  const double secs = f.train_seconds + seconds_since(t0);
  const bool ok = ebm_auc >= bayes - 0.02 && secs < 600;
  return {ok, fmt("EBM %.4f", ebm_auc) + fmt(", Bayes %.4f", bayes) + fmt(", %.0f s", secs)};
}

// ---------------------------------------------------------------------------
// 4. GBDT(reg) >= EBM >= LR on data with strong non-monotone shapes, one
// pairwise and one three-way interaction.

SynthConfig ordering_config(std::uint64_t seed) {
  using T = NumericDistribution::Type;
  SynthConfig c;
  c.first_year = 2014;
  c.last_year = 2015;
  c.n_per_year = 20'000;
  c.seed = seed;
  c.intercept = -1.2;
  auto num = [](std::string name, std::vector<Knot> shape) {
    SynthFeature f;
    f.name = std::move(name);
    f.distribution = {T::kUniform, -1, 1};
    f.shape = std::move(shape);
    return f;
  };
  c.features = {
      num("u1", {{-1, -1.2}, {-0.5, 0.8}, {0, -0.6}, {0.5, 0.9}, {1, -1.0}}),
      num("u2", {{-1, 1.0}, {0, -1.0}, {1, 1.0}}),
      num("u3", {{-1, -0.8}, {-0.3, 0.8}, {0.3, -0.8}, {1, 0.8}}),
      num("u4", {{-1, 0.6}, {-0.2, 0.6}, {0.2, -0.6}, {1, -0.6}}),
      num("v1", {}),
      num("v2", {}),
      num("v3", {}),
      num("n1", {}),
      num("n2", {}),
  };
  SynthFeature k;
  k.name = "k";
  k.kind = ColumnKind::kCategorical;
  k.categories = {"a", "b", "c", "d"};
  k.probabilities = {0.25, 0.25, 0.25, 0.25};
  k.effects = {0.5, -0.5, 0.3, -0.3};
  c.features.push_back(k);
  // The three-way term fires when v1, v2 and v3 are all positive; pairs can
  // only approximate it.
  const std::vector<Knot> step{{-0.05, 0}, {0.05, 1}};
  c.interactions = {
      {0.8, {{"u1", {{-1, -1}, {1, 1}}, {}}, {"u2", {{-1, -1}, {1, 1}}, {}}}},
      {2.5, {{"v1", step, {}}, {"v2", step, {}}, {"v3", step, {}}}},
  };
  return c;
}

Outcome relative_ordering() {
  // Hyperparameters for 20,000 training rows: boosting with lambda 5 and
  // 300 trees of depth 4 at rate 0.05; EBM with 3 bags at rate 0.02 and 10
  // pairs (the published rate 0.0014 is tuned for far larger data); L1
  // logistic regression at strength 1e-4.
  ModelSpec gbdt;
  gbdt.name = "gbdt";
  gbdt.family = ModelFamily::kGbdt;
  gbdt.gbdt.n_estimators = 300;
  gbdt.gbdt.learning_rate = 0.05;
  gbdt.gbdt.max_depth = 4;
  gbdt.gbdt.reg_lambda = 5;
  gbdt.gbdt.min_child_weight = 5;
  ModelSpec ebm;
  ebm.name = "ebm";
  ebm.family = ModelFamily::kEbm;
  ebm.ebm.outer_bags = 3;
  ebm.ebm.learning_rate = 0.02;
  ebm.ebm.interactions = 10;
  ModelSpec lr;
  lr.name = "lr";
  lr.family = ModelFamily::kLinear;
  lr.l1_strength = 1e-4;

  int holds = 0;
  double sum_g = 0, sum_e = 0, sum_l = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto data = synthesize(ordering_config(seed)).data;
    const auto train = years_of(data, {2014}), validate = years_of(data, {2015});
    auto score = [&](const ModelSpec& s) {
      return auc(predict_scores(fit_model(s, train, seed), validate), validate.outcome());
    };
    const double g = score(gbdt), e = score(ebm), l = score(lr);
    holds += g >= e && e >= l;
    sum_g += g, sum_e += e, sum_l += l;
  }
  const double mg = sum_g / 10, me = sum_e / 10, ml = sum_l / 10;
  const bool ok = holds >= 8 && mg >= me && me >= ml && mg - me <= 0.02;
  return {ok, "ordering held in " + std::to_string(holds) + "/10; mean GBDT " + fmt("%.4f", mg) +
                  fmt(", EBM %.4f", me) + fmt(", LR %.4f", ml)};
}

// ---------------------------------------------------------------------------
// 5. Backward selection from 20 mains to 5 in steps of 5.

Outcome sparsity_protocol() {
  auto cfg = signal_noise_config(5, 15, 10'000, 31);
  cfg.last_year = 2015;
  const auto data = synthesize(cfg).data;
  const auto train = years_of(data, {2014}), validate = years_of(data, {2015});
  const auto layout = fit_bins(train, kDefaultMaxBins);
  // Faster than the published rate on 10,000 rows; 10 pairs = floor(0.5 * 20).
  EbmHyperparams hp;
  hp.outer_bags = 3;
  hp.learning_rate = 0.02;
  hp.interactions = 10;
  hp.seed = 5;
  const auto sweep = backward_select(apply_bins(train, layout), apply_bins(validate, layout), hp, 5, 5);

  std::vector<std::size_t> counts;
  bool pairs_ok = sweep.full.n_interactions == 10;
  for (const auto& s : sweep.steps) {
    counts.push_back(s.n_mains);
    pairs_ok &= s.n_interactions == s.n_mains / 2;
  }
  const bool steps_ok = sweep.error.empty() && counts == std::vector<std::size_t>{15, 10, 5};
  if (!steps_ok) return {false, "steps did not reach 5 mains: " + sweep.error};
  const auto& last = sweep.steps.back();
  std::set<std::string> kept(last.features.begin(), last.features.end());
  bool survivors = true;
  for (int i = 0; i < 5; ++i) survivors &= kept.count("signal_" + std::to_string(i)) == 1;
  const bool ok = pairs_ok && survivors && last.validation_auc >= 0.6;
  return {ok, fmt("AUC at 5 mains %.4f", last.validation_auc) + (survivors ? ", all signals kept" : ", signal lost") +
                  (pairs_ok ? ", pairs = floor(n/2)" : ", pair count wrong")};
}

// ---------------------------------------------------------------------------
// 6. Smoothing: roughness monotone in lambda, lambda = 0 is the identity, and
// the calibrated lambda costs at most 0.01 AUC. Lambda is calibrated on 2016
// and the drop measured on 2017.

Outcome smoothing() {
  const auto& f = default_fixture();
  const auto& model = f.model;
  const std::vector<double> grid{0.0, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2};
  std::vector<std::string> features;
  for (const auto& b : model.layout) {
    if (b.kind == ColumnKind::kNumeric && b.regular_bins() >= 4) features.push_back(b.name);
  }
  bool monotone = true;
  double identity_err = 0;
  for (std::size_t k = 0; k < model.mains.size(); ++k) {
    if (std::find(features.begin(), features.end(), model.mains[k].feature) == features.end()) continue;
    double prev = INFINITY;
    for (double lambda : grid) {
      const auto s = smooth_shape(model.mains[k], model.layout[k], lambda);
      monotone &= s.roughness_after <= prev;
      prev = s.roughness_after;
      if (lambda == 0) {
        for (std::size_t b = 0; b < s.scores.size(); ++b) {
          identity_err = std::max(identity_err, std::abs(s.scores[b] - model.mains[k].scores[b]));
        }
      }
    }
  }
  const auto calibrate = apply_bins(years_of(f.synth.data, {2016}), model.layout);
  const auto evaluate = apply_bins(years_of(f.synth.data, {2017}), model.layout);
  const double lambda = calibrate_lambda(model, features, grid, calibrate, 0.005);
  SmoothPlan plan;
  for (const auto& name : features) plan.lambdas[name] = lambda;
  const auto smoothed = smooth_model(model, plan);
  const double raw_auc = auc(predict_logit(model, evaluate), evaluate.outcome());
  const double smooth_auc = auc(predict_logit(smoothed.model, evaluate), evaluate.outcome());
  const bool ok = monotone && identity_err <= 1e-8 && smoothed.errors.empty() && smooth_auc >= raw_auc - 0.01;
  return {ok, std::to_string(features.size()) + " features, " + (monotone ? "roughness monotone" : "NOT monotone") +
                  fmt(", identity err %.2g", identity_err) + fmt(", lambda %g", lambda) +
                  fmt(", AUC %.4f", raw_auc) + fmt(" -> %.4f", smooth_auc)};
}

// ---------------------------------------------------------------------------
// 7. Fairness on the three age bands of the default generator, scored by the
// default-data EBM saved to disk; thresholds calibrated on 2015.

Outcome fairness() {
  const auto& f = default_fixture();
  const auto dir = fs::temp_directory_path() / "interprisk_acceptance";
  fs::create_directories(dir);
  const auto scorer_file = dir / "scorer.json";
  save_model(AnyModel(f.model), scorer_file);
  const auto hash_before = fnv1a(read_file(scorer_file));

  const auto& data = f.validate;
  const auto scorer = load_model(scorer_file);
  const auto scores = predict_scores(scorer, data);
  const auto labels = data.outcome();
  const auto col = data.schema().require("age_band");
  const auto& cats = data.schema().column(col).categories;
  std::vector<std::string> groups;
  for (double v : data.column(col)) groups.push_back(cats.at(static_cast<std::size_t>(v)));

  // Base rates must rise with age for the premise to hold.
  std::map<std::string, std::pair<double, double>> rate;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    rate[groups[i]].first += labels[i];
    rate[groups[i]].second += 1;
  }
  bool rising = true;
  for (std::size_t g = 1; g < cats.size(); ++g) {
    rising &= rate[cats[g]].first / rate[cats[g]].second > rate[cats[g - 1]].first / rate[cats[g - 1]].second;
  }

  const auto thr = threshold_for_tpr(scores, labels, 0.8);
  const auto pre = group_report(scores, labels, groups, uniform_policy(cats, thr.threshold), ReportMode::kExpected);
  double lo = 1, hi = 0;
  for (const auto& g : pre.groups) {
    lo = std::min(lo, g.matrix.normalized()[1]);
    hi = std::max(hi, g.matrix.normalized()[1]);
  }
  const double fp_spread = hi - lo;

  EqualizeOptions eq;
  eq.seed = 3;
  const auto result = equalize_fpr(scores, labels, groups, eq);
  const auto post = group_report(scores, labels, groups, result.policy, ReportMode::kExpected);
  double flo = 1, fhi = 0;
  for (const auto& g : post.groups) {
    flo = std::min(flo, g.fpr);
    fhi = std::max(fhi, g.fpr);
  }
  const bool unchanged = fnv1a(read_file(scorer_file)) == hash_before;

  const bool ok = rising && fp_spread >= 0.05 && fhi - flo <= 0.01 && post.tpr < pre.tpr &&
                  post.accuracy >= pre.accuracy && unchanged;
  return {ok, fmt("pre FP-norm spread %.4f", fp_spread) + fmt(", post FPR spread %.2g", fhi - flo) +
                  fmt(", TPR %.4f", pre.tpr) + fmt(" -> %.4f", post.tpr) + fmt(", accuracy %.4f", pre.accuracy) +
                  fmt(" -> %.4f", post.accuracy) + (unchanged ? ", scorer unchanged" : ", scorer CHANGED") +
                  (rising ? "" : ", base rates not rising")};
}

// ---------------------------------------------------------------------------
// 8. Leakage: plan properties, bin edges from train rows only, test fold
// untouched without include_test.

Outcome leakage() {
  Rng rng(88);
  bool plan_ok = true;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int> years;
    const auto n = 2 + rng.below(12);
    for (std::uint64_t i = 0; i < n; ++i) years.push_back(2000 + static_cast<int>(rng.below(25)));
    if (std::set<int>(years.begin(), years.end()).size() < 2) continue;
    const auto plan = split_moving_window(years);
    try {
      check_plan(plan);
    } catch (const ConfigError&) {
      plan_ok = false;
    }
    for (const auto& f : plan.folds) {
      plan_ok &= *std::max_element(f.train_years.begin(), f.train_years.end()) <
                 *std::min_element(f.validate_years.begin(), f.validate_years.end());
    }
  }

  // Replace every non-training cell with extreme values: a fold's layout must
  // not move.
  auto cfg = default_synth_config();
  cfg.n_per_year = 2000;
  cfg.last_year = 2017;
  const auto data = synthesize(cfg).data;
  const auto plan = split_moving_window(data);
  std::vector<std::vector<double>> cols(data.schema().size());
  std::vector<std::uint8_t> flipped(data.outcome().begin(), data.outcome().end());
  for (std::size_t c = 0; c < data.schema().size(); ++c) {
    const auto src = data.column(c);
    cols[c].assign(src.begin(), src.end());
  }
  const int test_year = plan.test_fold->validate_years.front();
  bool edges_ok = true;
  for (const auto& fold : plan.folds) {
    auto injected = cols;
    for (std::size_t c = 0; c < data.schema().size(); ++c) {
      const auto& spec = data.schema().column(c);
      if (spec.role != ColumnRole::kFeature || spec.kind != ColumnKind::kNumeric) continue;
      for (std::size_t i = 0; i < data.rows(); ++i) {
        if (data.years()[i] != fold.train_years.front()) injected[c][i] = i % 2 ? 1e12 : -1e12;
      }
    }
    const Dataset poisoned(data.schema(), injected, flipped, {data.years().begin(), data.years().end()});
    edges_ok &= fold_layout(poisoned, fold, kDefaultMaxBins) == fold_layout(data, fold, kDefaultMaxBins);
  }

  // Scramble the test year: results without include_test must not change.
  for (std::size_t i = 0; i < data.rows(); ++i) {
    if (data.years()[i] == test_year) flipped[i] = 1 - flipped[i];
  }
  const Dataset scrambled(data.schema(), cols, flipped, {data.years().begin(), data.years().end()});
  ModelSpec lr;
  lr.name = "lr";
  lr.family = ModelFamily::kLinear;
  lr.l1_strength = 1e-3;
  const auto a = run_cv(data, plan, {lr});
  const auto b = run_cv(scrambled, plan, {lr});
  bool untouched = results_csv(a) == results_csv(b);
  for (const auto& r : a) untouched &= !r.test && std::count(r.validate_years.begin(), r.validate_years.end(), test_year) == 0;
  CvOptions with_test;
  with_test.include_test = true;
  const auto c = run_cv(data, plan, {lr}, with_test);
  const bool included = !c.empty() && c.back().test && c.back().validate_years.front() == test_year;

  const bool ok = plan_ok && edges_ok && untouched && included;
  return {ok, std::string(plan_ok ? "plans ok" : "plan leak") + (edges_ok ? ", edges ok" : ", edges moved") +
                  (untouched ? ", test fold untouched" : ", test fold touched") +
                  (included ? ", included on request" : ", missing with include_test")};
}

// ---------------------------------------------------------------------------
// 9. L1 optimality conditions and a monotone sparsity path.

struct L1Problem {
  Dataset data;
  Standardization st;
  std::vector<std::vector<double>> x;
  double lambda_max = 0;
};

// p <= 10 columns, n <= 500 rows; column j mixes in rho times the noise of
// column j-1.
L1Problem l1_problem(Rng& rng, double rho) {
  const auto p = static_cast<std::size_t>(1 + rng.below(10));
  const auto n = static_cast<std::size_t>(50 + rng.below(451));
  std::vector<ColumnSpec> specs;
  for (std::size_t j = 0; j < p; ++j) specs.push_back({"x" + std::to_string(j), ColumnKind::kNumeric, {}, ColumnRole::kFeature});
  specs.push_back({"y", ColumnKind::kNumeric, {}, ColumnRole::kOutcome});
  specs.push_back({"t", ColumnKind::kNumeric, {}, ColumnRole::kTime});
  std::vector<std::vector<double>> cols(p + 2, std::vector<double>(n));
  std::vector<std::uint8_t> y(n);
  std::vector<double> beta(p);
  for (auto& b : beta) b = rng.uniform() < 0.4 ? 0.0 : 1.5 * rng.normal();
  for (std::size_t i = 0; i < n; ++i) {
    double eta = rng.normal() * 0.5 - 0.5, prev = 0;
    for (std::size_t j = 0; j < p; ++j) {
      const double z = rng.normal();
      cols[j][i] = z + rho * prev + 3.0;
      prev = z;
      eta += beta[j] * z;
    }
    y[i] = rng.uniform() < sigmoid(eta);
  }
  y[0] = 1;
  y[1] = 0;
  L1Problem pr;
  pr.data = Dataset(Schema(specs), cols, y, std::vector<int>(n, 2014));
  pr.st = standardize_fit(pr.data);
  pr.x = design_matrix(pr.st, pr.data);
  // Gradient of the mean loss at zero coefficients bounds the useful range.
  double ybar = 0;
  for (auto v : y) ybar += v;
  ybar /= static_cast<double>(n);
  for (const auto& col : pr.x) {
    double g = 0;
    for (std::size_t i = 0; i < n; ++i) g += col[i] * (ybar - y[i]);
    pr.lambda_max = std::max(pr.lambda_max, std::abs(g) / static_cast<double>(n));
  }
  return pr;
}

// Largest violation of the optimality conditions of
// mean logistic loss + lambda * |beta|_1 (intercept free).
double kkt_violation(const L1Problem& pr, const LinearModel& m, double lambda) {
  const auto y = pr.data.outcome();
  const std::size_t n = y.size();
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    double eta = m.intercept;
    for (std::size_t j = 0; j < pr.x.size(); ++j) eta += m.coefficients[j] * pr.x[j][i];
    r[i] = sigmoid(eta) - y[i];
  }
  double g0 = 0;
  for (double v : r) g0 += v;
  double worst = std::abs(g0) / static_cast<double>(n);
  for (std::size_t j = 0; j < pr.x.size(); ++j) {
    double g = 0;
    for (std::size_t i = 0; i < n; ++i) g += pr.x[j][i] * r[i];
    g /= static_cast<double>(n);
    const double b = m.coefficients[j];
    worst = std::max(worst, b == 0 ? std::max(0.0, std::abs(g) - lambda) : std::abs(g + (b > 0 ? lambda : -lambda)));
  }
  return worst;
}

Outcome l1_kkt() {
  Rng rng(404);
  double worst = 0;
  int nonconverged = 0, path_breaks = 0;
  for (int problem = 0; problem < 100; ++problem) {
    // Optimality on correlated designs.
    const auto pr = l1_problem(rng, 0.5);
    const double lambda = pr.lambda_max * (0.02 + 0.9 * rng.uniform());
    const auto m = train_logistic_l1(pr.st, pr.x, pr.data.outcome(), lambda);
    nonconverged += !m.converged;
    worst = std::max(worst, kkt_violation(pr, m, lambda));

    // With correlated columns the exact lasso path may drop a variable as the
    // penalty weakens, so the path is checked on independent columns.
    const auto ind = l1_problem(rng, 0.0);
    std::vector<double> strengths;
    for (int k = 0; k < 10; ++k) strengths.push_back(ind.lambda_max * std::pow(10.0, -2.0 + 2.2 * k / 9.0));
    const auto path = sparsity_path(ind.data, ind.data, strengths);
    for (std::size_t k = 1; k < path.size(); ++k) path_breaks += path[k].nonzero_count > path[k - 1].nonzero_count;
  }
  const bool ok = worst <= 1e-6 && nonconverged == 0 && path_breaks == 0;
  return {ok, fmt("max KKT violation %.3g", worst) + ", " + std::to_string(nonconverged) + " not converged, " +
                  std::to_string(path_breaks) + " path breaks over 100 paths"};
}

// ---------------------------------------------------------------------------
// 10. Two cv runs from one manifest give byte-identical results.

Outcome determinism() {
  const auto root = fs::temp_directory_path() / "interprisk_acceptance_cv";
  fs::remove_all(root);
  fs::create_directories(root);
  auto synth = nlohmann::json::parse(synth_config_to_json(default_synth_config()));
  synth["years"] = {2014, 2016};
  synth["n_per_year"] = 3000;
  const nlohmann::json cfg = {{"data", {{"synth", synth}}}, {"seed", 17}};
  write_file_atomic(root / "config.json", cfg.dump(2));

  std::ostringstream out, err;
  auto run = [&](const fs::path& config, const fs::path& dir) {
    return cli::run({"cv", "--config", config.string(), "--out", dir.string()}, out, err);
  };
  if (run(root / "config.json", root / "first") != 0) return {false, "first run failed: " + err.str()};
  const auto manifest = root / "first" / "manifest.json";
  if (run(manifest, root / "a") != 0 || run(manifest, root / "b") != 0) return {false, "rerun failed: " + err.str()};
  const auto a = read_file(root / "a" / "results.csv"), b = read_file(root / "b" / "results.csv");
  const auto first = read_file(root / "first" / "results.csv");
  const bool ok = a == b && a == first && std::count(a.begin(), a.end(), '\n') == 6;
  return {ok, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "DIFFERENT") +
                  (a == first ? ", matches the original run" : ", differs from the original run")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AUC equals the all-pairs count", auc_oracle},
      {"EBM logit is intercept plus explanation terms", additivity},
      {"EBM recovers the synthetic risk", synthetic_recovery},
      {"GBDT >= EBM >= LR with a small gap", relative_ordering},
      {"backward selection protocol", sparsity_protocol},
      {"shape smoothing", smoothing},
      {"FPR equalization across age bands", fairness},
      {"no leakage across years", leakage},
      {"L1 optimality and sparsity path", l1_kkt},
      {"cv reruns are byte-identical", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu: %s - %s (%s) [%.1f s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
