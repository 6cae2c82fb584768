#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "interprisk/fairness.hpp"
#include "interprisk/harness.hpp"
#include "interprisk/metrics.hpp"
#include "interprisk/smoothing.hpp"
#include "interprisk/sparsity.hpp"
#include "interprisk/svg.hpp"
#include "interprisk/synth.hpp"

namespace interprisk::cli {

using json = nlohmann::json;

namespace {

struct Loaded {
  Dataset data;
  std::vector<double> true_logit, true_probability;  // synthetic data only
  Warnings warnings;
};

SynthConfig synth_config_of(const json& data) {
  const auto& s = data.at("synth");
  SynthConfig cfg;
  if (s.is_string() && s.get<std::string>() == "default") {
    cfg = default_synth_config();
  } else if (s.is_string()) {
    cfg = synth_config_from_json(read_file(s.get<std::string>()));
  } else {
    cfg = synth_config_from_json(s.dump());
  }
  if (data.contains("synth_seed")) cfg.seed = data.at("synth_seed").get<std::uint64_t>();
  return cfg;
}

Loaded load_data(const RunContext& ctx) {
  const auto& d = ctx.config.at("data");
  if (!d.is_object()) throw ConfigError("'data' must be an object");
  Loaded out;
  if (d.contains("synth")) {
    auto r = synthesize(synth_config_of(d));
    out.data = std::move(r.data);
    out.true_logit = std::move(r.true_logit);
    out.true_probability = std::move(r.true_probability);
    out.warnings = std::move(r.warnings);
  } else if (d.contains("csv")) {
    if (!d.contains("schema")) throw ConfigError("'data' needs a 'schema' next to 'csv'");
    const auto schema = load_schema(d.at("schema").get<std::string>());
    out.data = load_csv(d.at("csv").get<std::string>(), schema);
  } else {
    throw ConfigError("'data' needs either 'synth' or 'csv'");
  }
  return out;
}

// Collects output files and writes the manifest last.
class Outputs {
 public:
  explicit Outputs(const RunContext& ctx) : ctx_(ctx) {}

  void write(const std::string& name, const std::string& contents, bool track = true) {
    write_file_atomic(ctx_.out_dir / name, contents);
    if (track) hashes_[name] = hex64(fnv1a(contents));
  }

  void manifest(const Dataset* data, json summary, bool test_evaluated = false) {
    json m;
    m["format"] = "interprisk-manifest";
    m["version"] = 1;
    m["command"] = ctx_.command;
    m["config"] = ctx_.config;
    m["config_hash"] = hex64(fnv1a(ctx_.config.dump()));
    if (data) m["dataset_hash"] = hex64(data->content_hash());
    m["test_evaluated"] = test_evaluated;
    m["outputs"] = hashes_;
    m["summary"] = std::move(summary);
    write_file_atomic(ctx_.out_dir / "manifest.json", m.dump(2) + "\n");
  }

 private:
  const RunContext& ctx_;
  std::map<std::string, std::string> hashes_;
};

std::string fmt(double v) { return std::isnan(v) ? std::string() : format_double(v); }

std::vector<int> years_from(const json& cfg, const char* key, const std::vector<int>& fallback) {
  if (!cfg.contains(key)) return fallback;
  auto v = cfg.at(key).get<std::vector<int>>();
  if (v.empty()) throw ConfigError(std::string("'") + key + "' is empty");
  return v;
}

struct Split {
  std::vector<int> train_years, validate_years;
  Dataset train, validate;
};

// Train/validate years default to the first fold of the moving-window plan.
// Validating on the quarantined test year needs --include-test.
Split split_years(const RunContext& ctx, const Dataset& data) {
  const auto plan = split_moving_window(data);
  Split s;
  s.train_years = years_from(ctx.config, "train_years", plan.folds.front().train_years);
  s.validate_years = years_from(ctx.config, "validate_years", plan.folds.front().validate_years);
  if (plan.test_fold && !ctx.config.at("include_test").get<bool>()) {
    for (int y : plan.test_fold->validate_years) {
      const bool used = std::count(s.validate_years.begin(), s.validate_years.end(), y) ||
                        std::count(s.train_years.begin(), s.train_years.end(), y);
      if (used) throw ConfigError("year " + std::to_string(y) + " is the quarantined test year; pass --include-test");
    }
  }
  const auto rows = fold_rows(data, Fold{s.train_years, s.validate_years});
  if (rows.train.empty()) throw ConfigError("no rows in the training years");
  if (rows.validate.empty()) throw ConfigError("no rows in the validation years");
  s.train = data.subset(rows.train);
  s.validate = data.subset(rows.validate);
  return s;
}

ModelSpec resolve_spec(const json& j) {
  if (j.is_string()) return resolve_spec(json{{"model", j}});
  const auto kind = j.at("model").get<std::string>();
  for (const auto& s : default_model_specs()) {
    if (s.name == kind) {
      if (!j.contains("params")) return s;
      json full = s.to_json();
      for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it) full["params"][it.key()] = it.value();
      if (j.contains("name")) full["name"] = j.at("name");
      return ModelSpec::from_json(full);
    }
  }
  return ModelSpec::from_json(j);
}

ModelSpec model_spec(const RunContext& ctx, const char* fallback) {
  return ctx.config.contains("model") ? resolve_spec(ctx.config.at("model")) : resolve_spec(json(fallback));
}

std::uint64_t run_seed(const RunContext& ctx) { return ctx.config.at("seed").get<std::uint64_t>(); }

std::string years_text(const std::vector<int>& years) {
  std::string out;
  for (std::size_t i = 0; i < years.size(); ++i) out += (i ? ";" : "") + std::to_string(years[i]);
  return out;
}

json obj(const RunContext& ctx, const char* key) {
  return ctx.config.contains(key) ? ctx.config.at(key) : json::object();
}

EbmModel require_ebm(AnyModel model) {
  if (auto* e = std::get_if<EbmModel>(&model)) return std::move(*e);
  throw ConfigError("this command needs an EBM model, got '" + model_kind(model) + "'");
}

}  // namespace

void cmd_synth(RunContext& ctx) {
  if (!ctx.config.at("data").contains("synth")) throw ConfigError("synth needs a generator configuration");
  const auto cfg = synth_config_of(ctx.config.at("data"));
  const auto r = synthesize(cfg);
  Outputs out(ctx);
  out.write("data.csv", to_csv(r.data));
  out.write("schema.json", schema_to_json(r.data.schema()));
  out.write("synth_config.json", synth_config_to_json(cfg));
  std::ostringstream truth;
  truth << "row,true_logit,true_probability\n";
  for (std::size_t i = 0; i < r.data.rows(); ++i) {
    truth << i << ',' << format_double(r.true_logit[i]) << ',' << format_double(r.true_probability[i]) << '\n';
  }
  out.write("truth.csv", truth.str());
  const double prevalence = r.data.prevalence();
  out.manifest(&r.data, {{"rows", r.data.rows()},
                         {"features", r.data.schema().indices_with_role(ColumnRole::kFeature).size()},
                         {"prevalence", prevalence},
                         {"seed", cfg.seed},
                         {"warnings", r.warnings}});
  *ctx.log << "synth: " << r.data.rows() << " rows, prevalence " << format_double(prevalence) << " -> "
           << ctx.out_dir.string() << "\n";
}

void cmd_train(RunContext& ctx) {
  const auto loaded = load_data(ctx);
  const auto split = split_years(ctx, loaded.data);
  const auto spec = model_spec(ctx, "ebm");
  if (spec.family == ModelFamily::kFile) throw ConfigError("train needs a trainable model kind");
  const auto model = fit_model(spec, split.train, mix_seed(run_seed(ctx), 0));
  Outputs out(ctx);
  out.write("model.json", model_to_json(model));
  const double train_auc = auc(predict_scores(model, split.train), split.train.outcome());
  const double validate_auc = auc(predict_scores(model, split.validate), split.validate.outcome());
  const json metrics = {{"model", spec.name},
                        {"kind", model_kind(model)},
                        {"train_years", split.train_years},
                        {"validate_years", split.validate_years},
                        {"train_rows", split.train.rows()},
                        {"train_auc", train_auc},
                        {"validate_auc", validate_auc},
                        // An intercept-only model ranks every row equally.
                        {"intercept_only_auc", 0.5}};
  out.write("metrics.json", metrics.dump(2) + "\n");
  out.manifest(&loaded.data, metrics);
  *ctx.log << "train: " << spec.name << " train AUC " << format_double(train_auc) << ", validate AUC "
           << format_double(validate_auc) << "\n";
}

void cmd_cv(RunContext& ctx) {
  const auto loaded = load_data(ctx);
  const auto plan = split_moving_window(loaded.data);
  std::vector<ModelSpec> specs;
  if (ctx.config.contains("models")) {
    for (const auto& j : ctx.config.at("models")) specs.push_back(resolve_spec(j));
  } else {
    specs = default_model_specs();
  }
  if (specs.empty()) throw ConfigError("no models to cross-validate");
  CvOptions options;
  options.include_test = ctx.config.at("include_test").get<bool>();
  options.seed = run_seed(ctx);
  const auto results = run_cv(loaded.data, plan, specs, options);

  Outputs out(ctx);
  out.write("results.csv", results_csv(results));
  out.write("timings.csv", timings_csv(results), false);
  std::ostringstream plot;
  plot << "year,model,auc\n";
  std::map<std::string, svg::Series> series;
  for (const auto& r : results) {
    plot << years_text(r.validate_years) << ',' << r.model << ',' << fmt(r.auc) << '\n';
    auto& s = series[r.model];
    s.name = r.model;
    s.x.push_back(r.validate_years.back());
    s.y.push_back(r.auc);
  }
  out.write("auc_by_fold.csv", plot.str());
  std::vector<svg::Series> lines;
  for (const auto& spec : specs) lines.push_back(series[spec.name]);
  out.write("auc_by_fold.svg", svg::line_chart("AUC by validation year", "year", "AUC", lines));

  std::size_t failed = 0;
  for (const auto& r : results) failed += r.error.empty() ? 0 : 1;
  for (const auto& w : plan.warnings) *ctx.log << "warning: " << w << "\n";
  out.manifest(&loaded.data, {{"cells", results.size()}, {"failed", failed}, {"warnings", plan.warnings}},
               options.include_test && plan.test_fold.has_value());
  *ctx.log << "cv: " << results.size() << " cells (" << failed << " failed) -> " << ctx.out_dir.string() << "\n";
}

void cmd_sparsify(RunContext& ctx) {
  const auto loaded = load_data(ctx);
  const auto split = split_years(ctx, loaded.data);
  const auto spec = model_spec(ctx, "ebm");
  if (spec.family != ModelFamily::kEbm) throw ConfigError("sparsify needs an EBM model spec");
  const auto opts = obj(ctx, "sparsify");
  const auto step = opts.value("step", std::size_t{5});
  const auto floor = opts.value("floor", std::size_t{5});
  const auto mode_name = opts.value("mode", std::string("recompute"));
  ImportanceMode mode = ImportanceMode::kRecompute;
  if (mode_name == "initial") {
    mode = ImportanceMode::kInitial;
  } else if (mode_name != "recompute") {
    throw ConfigError("sparsify mode must be 'recompute' or 'initial'");
  }

  const auto layout = fit_bins(split.train, spec.max_bins);
  auto hp = spec.ebm;
  hp.seed = mix_seed(run_seed(ctx), 0);
  const auto sweep = backward_select(apply_bins(split.train, layout), apply_bins(split.validate, layout), hp, step,
                                     floor, mode);

  Outputs out(ctx);
  std::ostringstream csv;
  csv << "step,n_mains,n_interactions,auc,features\n";
  svg::Series line{"EBM", {}, {}};
  for (std::size_t i = 0; i < sweep.steps.size(); ++i) {
    const auto& s = sweep.steps[i];
    std::string feats;
    for (std::size_t k = 0; k < s.features.size(); ++k) feats += (k ? ";" : "") + s.features[k];
    csv << i + 1 << ',' << s.n_mains << ',' << s.n_interactions << ',' << format_double(s.validation_auc) << ','
        << feats << '\n';
    line.x.push_back(static_cast<double>(s.n_mains));
    line.y.push_back(s.validation_auc);
    out.write("ebm_" + std::to_string(s.n_mains) + ".json", model_to_json(s.model));
  }
  out.write("sparsity.csv", csv.str());
  out.write("sparsity.svg", svg::line_chart("Validation AUC by number of main effects", "main effects", "AUC", {line}));
  out.write("ebm_full.json", model_to_json(sweep.full.model));
  out.manifest(&loaded.data, {{"full_mains", sweep.full.n_mains},
                              {"full_interactions", sweep.full.n_interactions},
                              {"full_auc", sweep.full.validation_auc},
                              {"steps", sweep.steps.size()},
                              {"error", sweep.error}});
  if (!sweep.error.empty()) throw DataError(sweep.error);
  *ctx.log << "sparsify: " << sweep.steps.size() << " steps -> " << ctx.out_dir.string() << "\n";
}

void cmd_smooth(RunContext& ctx) {
  const auto loaded = load_data(ctx);
  const auto split = split_years(ctx, loaded.data);
  const auto opts = obj(ctx, "smooth");
  EbmModel model;
  if (opts.contains("model_file")) {
    model = require_ebm(load_model(opts.at("model_file").get<std::string>()));
  } else {
    const auto spec = model_spec(ctx, "ebm");
    if (spec.family != ModelFamily::kEbm) throw ConfigError("smooth needs an EBM model spec");
    model = require_ebm(fit_model(spec, split.train, mix_seed(run_seed(ctx), 0)));
  }
  const auto validate = apply_bins(split.validate, model.layout);

  std::vector<std::string> features;
  if (opts.contains("features")) {
    features = opts.at("features").get<std::vector<std::string>>();
  } else {
    for (const auto& b : model.layout) {
      if (b.kind == ColumnKind::kNumeric && b.regular_bins() >= 4) features.push_back(b.name);
    }
  }
  std::vector<double> lambdas = opts.value("lambdas", std::vector<double>{0.0, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2});
  std::sort(lambdas.begin(), lambdas.end());
  const auto sweep = lambda_sweep(model, features, lambdas, validate);

  SmoothPlan plan;
  if (opts.contains("plan")) {
    plan = smooth_plan_from_json(opts.at("plan").dump());
  } else {
    const double lambda = calibrate_lambda(model, features, lambdas, validate, opts.value("max_drop", 0.005));
    for (const auto& f : features) plan.lambdas[f] = lambda;
  }
  const auto result = smooth_model(model, plan);
  for (const auto& [f, msg] : result.errors) *ctx.log << "warning: " << f << ": " << msg << "\n";

  Outputs out(ctx);
  std::ostringstream csv;
  csv << "lambda,auc";
  for (const auto& f : features) csv << ",roughness_" << f;
  csv << '\n';
  for (const auto& pt : sweep) {
    csv << format_double(pt.lambda) << ',' << format_double(pt.auc);
    for (double r : pt.roughness) csv << ',' << format_double(r);
    csv << '\n';
  }
  out.write("lambda_sweep.csv", csv.str());
  std::ostringstream shapes;
  shapes << "feature,bin,x,raw,smoothed\n";
  for (const auto& s : result.shapes) {
    const auto& bins = result.model.layout[static_cast<std::size_t>(
        std::find_if(result.model.layout.begin(), result.model.layout.end(),
                     [&](const FeatureBins& b) { return b.name == s.feature; }) -
        result.model.layout.begin())];
    svg::Series raw{"raw", {}, {}}, smoothed{"smoothed", {}, {}};
    for (int b = 0; b < bins.regular_bins(); ++b) {
      const double x = bins.midpoint(b);
      shapes << s.feature << ',' << b << ',' << format_double(x) << ',' << format_double(s.raw_scores[static_cast<std::size_t>(b)])
             << ',' << format_double(s.scores[static_cast<std::size_t>(b)]) << '\n';
      raw.x.push_back(x);
      raw.y.push_back(s.raw_scores[static_cast<std::size_t>(b)]);
      smoothed.x.push_back(x);
      smoothed.y.push_back(s.scores[static_cast<std::size_t>(b)]);
    }
    out.write("shape_" + s.feature + ".svg",
              svg::line_chart(s.feature + " (lambda " + format_double(s.lambda) + ")", s.feature, "logit", {raw, smoothed}));
  }
  out.write("shapes.csv", shapes.str());
  out.write("smooth_plan.json", smooth_plan_to_json(plan));
  out.write("model_raw.json", model_to_json(model));
  out.write("model_smoothed.json", model_to_json(result.model));
  const double raw_auc = auc(predict_logit(model, validate), validate.outcome());
  const double smooth_auc = auc(predict_logit(result.model, validate), validate.outcome());
  out.manifest(&loaded.data, {{"validate_years", split.validate_years},
                              {"raw_auc", raw_auc},
                              {"smoothed_auc", smooth_auc},
                              {"errors", result.errors}});
  *ctx.log << "smooth: AUC " << format_double(raw_auc) << " -> " << format_double(smooth_auc) << "\n";
}

namespace {

std::string report_csv(const GroupReport& r) {
  std::ostringstream os;
  os << "group,tp,fp,tn,fn,tp_norm,fp_norm,tn_norm,fn_norm,tpr,fpr,tnr,accuracy,balanced_accuracy\n";
  auto line = [&](const std::string& name, const ConfusionMatrix& m) {
    const auto n = m.normalized();
    os << name << ',' << format_double(m.tp) << ',' << format_double(m.fp) << ',' << format_double(m.tn) << ','
       << format_double(m.fn);
    for (double v : n) os << ',' << format_double(v);
    os << ',' << format_double(m.tpr()) << ',' << format_double(m.fpr()) << ',' << format_double(m.tnr()) << ','
       << format_double(m.accuracy()) << ',' << format_double(m.balanced_accuracy()) << '\n';
  };
  for (const auto& g : r.groups) line(g.group, g.matrix);
  line("overall", r.overall);
  return os.str();
}

std::string report_svg(const std::string& title, const GroupReport& r) {
  std::vector<svg::HeatmapPanel> panels;
  for (const auto& g : r.groups) {
    const auto n = g.matrix.normalized();
    panels.push_back({g.group, {"actual 1", "actual 0"}, {"pred 1", "pred 0"}, {{n[0], n[3]}, {n[1], n[2]}}});
  }
  return svg::heatmaps(title, panels);
}

std::vector<std::string> group_labels(const Dataset& data, const std::string& column) {
  const auto col = data.schema().require(column);
  const auto& spec = data.schema().column(col);
  std::vector<std::string> out;
  out.reserve(data.rows());
  for (const double cell : data.column(col)) {
    if (is_missing(cell)) {
      out.emplace_back("missing");
    } else if (spec.kind == ColumnKind::kCategorical) {
      out.push_back(spec.categories.at(static_cast<std::size_t>(cell)));
    } else {
      out.push_back(format_double(cell));
    }
  }
  return out;
}

}  // namespace

void cmd_fairness(RunContext& ctx) {
  const auto loaded = load_data(ctx);
  const auto split = split_years(ctx, loaded.data);
  const auto opts = obj(ctx, "fairness");
  std::string group_column;
  if (opts.contains("group")) {
    group_column = opts.at("group").get<std::string>();
  } else {
    const auto cols = loaded.data.schema().indices_with_role(ColumnRole::kGroup);
    if (cols.size() != 1) throw ConfigError("name the group column with fairness.group");
    group_column = loaded.data.schema().column(cols.front()).name;
  }
  const double target_tpr = opts.value("target_tpr", 0.8);

  Outputs out(ctx);
  AnyModel model;
  if (opts.contains("model_file")) {
    model = load_model(opts.at("model_file").get<std::string>());
  } else {
    model = fit_model(model_spec(ctx, "ebm"), split.train, mix_seed(run_seed(ctx), 0));
    out.write("scorer.json", model_to_json(model));
  }
  const auto scorer_before = hex64(fnv1a(model_to_json(model)));

  const auto scores = predict_scores(model, split.validate);
  const auto labels = split.validate.outcome();
  const auto groups = group_labels(split.validate, group_column);
  std::vector<std::string> names;
  for (const auto& g : groups) {
    if (std::find(names.begin(), names.end(), g) == names.end()) names.push_back(g);
  }
  std::sort(names.begin(), names.end());

  const auto thr = threshold_for_tpr(scores, labels, target_tpr);
  const auto pre_policy = uniform_policy(names, thr.threshold);
  const auto pre = group_report(scores, labels, groups, pre_policy, ReportMode::kExpected);

  EqualizeOptions eq;
  eq.deterministic = ctx.config.at("deterministic_fairness").get<bool>();
  eq.seed = mix_seed(run_seed(ctx), 1);
  auto equalized = equalize_fpr(scores, labels, groups, eq);
  std::sort(equalized.policy.groups.begin(), equalized.policy.groups.end(),
            [](const GroupThreshold& a, const GroupThreshold& b) { return a.group < b.group; });
  const auto post = group_report(scores, labels, groups, equalized.policy, ReportMode::kExpected);
  const auto post_sampled = group_report(scores, labels, groups, equalized.policy, ReportMode::kSampled);
  const auto scorer_after = hex64(fnv1a(model_to_json(model)));

  out.write("policy.json", policy_to_json(equalized.policy));
  out.write("report_pre.csv", report_csv(pre));
  out.write("report_post.csv", report_csv(post));
  out.write("report_post_sampled.csv", report_csv(post_sampled));
  out.write("confusion_pre.svg", report_svg("Normalized confusion matrices, TPR " + format_double(target_tpr), pre));
  out.write("confusion_post.svg", report_svg("Normalized confusion matrices after FPR equalization", post));

  double fp_lo = 1, fp_hi = 0;
  for (const auto& g : pre.groups) {
    fp_lo = std::min(fp_lo, g.matrix.normalized()[1]);
    fp_hi = std::max(fp_hi, g.matrix.normalized()[1]);
  }
  json summary = {{"calibration_years", split.validate_years},
                  {"group_column", group_column},
                  {"threshold", thr.threshold},
                  {"achieved_tpr", thr.achieved_tpr},
                  {"pre_fp_norm_spread", fp_hi - fp_lo},
                  {"pre_tpr", pre.tpr},
                  {"pre_accuracy", pre.accuracy},
                  {"target_fpr", equalized.target_fpr},
                  {"post_fpr_spread", equalized.fpr_spread},
                  {"post_tpr", post.tpr},
                  {"post_accuracy", post.accuracy},
                  {"deterministic", eq.deterministic},
                  {"scorer_hash_before", scorer_before},
                  {"scorer_hash_after", scorer_after},
                  {"warnings", equalized.warnings}};

  if (opts.contains("heldout_years")) {
    const auto years = opts.at("heldout_years").get<std::vector<int>>();
    const auto plan = split_moving_window(loaded.data);
    if (plan.test_fold && !ctx.config.at("include_test").get<bool>()) {
      for (int y : plan.test_fold->validate_years) {
        if (std::count(years.begin(), years.end(), y)) {
          throw ConfigError("year " + std::to_string(y) + " is the quarantined test year; pass --include-test");
        }
      }
    }
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < loaded.data.rows(); ++i) {
      if (std::count(years.begin(), years.end(), loaded.data.years()[i])) rows.push_back(i);
    }
    if (rows.empty()) throw ConfigError("no rows in the held-out years");
    const auto held = loaded.data.subset(rows);
    const auto hs = predict_scores(model, held);
    const auto hg = group_labels(held, group_column);
    out.write("report_heldout_pre.csv", report_csv(group_report(hs, held.outcome(), hg, pre_policy, ReportMode::kExpected)));
    const auto hpost = group_report(hs, held.outcome(), hg, equalized.policy, ReportMode::kExpected);
    out.write("report_heldout_post.csv", report_csv(hpost));
    summary["heldout_years"] = years;
    summary["heldout_post_tpr"] = hpost.tpr;
    summary["heldout_post_accuracy"] = hpost.accuracy;
  }
  out.manifest(&loaded.data, summary);
  *ctx.log << "fairness: TPR " << format_double(pre.tpr) << " -> " << format_double(post.tpr) << ", accuracy "
           << format_double(pre.accuracy) << " -> " << format_double(post.accuracy) << ", FPR spread "
           << format_double(equalized.fpr_spread) << "\n";
}

void cmd_explain(RunContext& ctx) {
  const auto opts = obj(ctx, "explain");
  if (!opts.contains("model_file")) throw ConfigError("explain needs --model-file");
  const auto model = require_ebm(load_model(opts.at("model_file").get<std::string>()));
  const auto loaded = load_data(ctx);
  const auto top = opts.value("top", kDefaultExplanationTerms);
  Outputs out(ctx);

  if (opts.value("global", false)) {
    const auto ranked = feature_importance(model, apply_bins(loaded.data, model.layout));
    std::ostringstream csv;
    csv << "rank,term,importance\n";
    std::vector<svg::Bar> bars;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      csv << i + 1 << ',' << ranked[i].term << ',' << format_double(ranked[i].importance) << '\n';
      if (i < top) bars.push_back({ranked[i].term, ranked[i].importance});
    }
    out.write("importance.csv", csv.str());
    out.write("importance.svg", svg::bar_chart("Mean absolute contribution (logit)", bars));
    out.manifest(&loaded.data, {{"terms", ranked.size()}});
    *ctx.log << "explain: " << ranked.size() << " terms ranked\n";
    return;
  }

  const auto row = opts.value("row", std::size_t{0});
  if (row >= loaded.data.rows()) throw ConfigError("row " + std::to_string(row) + " is out of range");
  PredictDiagnostics diag;
  const LayoutBinding binding(model.layout, loaded.data.schema());
  const auto record = binding.record(loaded.data, row);
  const auto e = local_explanation(model, record, &diag);
  const auto t = truncate(e, top);
  std::ostringstream csv;
  csv << "term,contribution,sign\n";
  csv << "intercept," << format_double(t.intercept) << ',' << (t.intercept > 0 ? 1 : (t.intercept < 0 ? -1 : 0)) << '\n';
  std::vector<svg::Bar> bars{{"intercept", t.intercept}};
  for (const auto& c : t.terms) {
    csv << c.term << ',' << format_double(c.contribution) << ',' << c.sign << '\n';
    bars.push_back({c.term, c.contribution});
  }
  if (t.remainder) {
    csv << t.remainder->term << ',' << format_double(t.remainder->contribution) << ',' << t.remainder->sign << '\n';
    bars.push_back({t.remainder->term, t.remainder->contribution});
  }
  out.write("explanation.csv", csv.str());
  out.write("explanation.svg", svg::bar_chart("Contributions to the logit, row " + std::to_string(row), bars));
  out.manifest(&loaded.data, {{"row", row},
                              {"logit", e.logit},
                              {"probability", sigmoid(e.logit)},
                              {"unknown_categories", diag.unknown_categories}});
  *ctx.log << "explain: row " << row << " logit " << format_double(e.logit) << "\n";
}

void cmd_sweep(RunContext& ctx) {
  if (!ctx.config.contains("grid")) throw ConfigError("sweep needs a 'grid' list of model specs");
  std::vector<ModelSpec> grid;
  for (const auto& j : ctx.config.at("grid")) grid.push_back(resolve_spec(j));
  const auto loaded = load_data(ctx);
  const auto plan = split_moving_window(loaded.data);
  CvOptions options;
  options.include_test = false;
  options.seed = run_seed(ctx);
  const auto ranked = grid_sweep(loaded.data, plan, grid, options);

  Outputs out(ctx);
  std::ostringstream csv;
  csv << "rank,name,model,params_hash,mean_auc,params\n";
  std::vector<FoldResult> all;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& e = ranked[i];
    std::string params = e.spec.to_json().at("params").dump();
    std::replace(params.begin(), params.end(), ',', ';');
    csv << i + 1 << ',' << e.spec.name << ',' << to_string(e.spec.family) << ',' << e.spec.params_hash() << ','
        << fmt(e.mean_auc) << ',' << params << '\n';
    all.insert(all.end(), e.folds.begin(), e.folds.end());
  }
  out.write("sweep.csv", csv.str());
  out.write("sweep_folds.csv", results_csv(all));
  out.manifest(&loaded.data, {{"points", ranked.size()}, {"best", ranked.front().spec.name}});
  *ctx.log << "sweep: best " << ranked.front().spec.name << " mean AUC " << fmt(ranked.front().mean_auc) << "\n";
}

}  // namespace interprisk::cli
