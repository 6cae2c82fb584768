#include "cli.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "interprisk/common.hpp"
#include "interprisk/data.hpp"

namespace interprisk::cli {

using json = nlohmann::json;

namespace {

const char* const kTopLevelKeys[] = {"data",     "models", "model",   "seed",   "include_test",
                                     "deterministic_fairness", "train_years", "validate_years",
                                     "sparsify", "smooth", "fairness", "explain", "grid"};

json load_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config '" + path + "' must be an object");
  // A manifest from an earlier run carries its resolved configuration.
  if (j.value("format", "") == "interprisk-manifest") return j.at("config");
  // A bare generator configuration.
  if (j.contains("features") && !j.contains("data")) return json{{"data", {{"synth", j}}}};
  return j;
}

void check_keys(const json& cfg) {
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    bool known = false;
    for (const char* k : kTopLevelKeys) known |= it.key() == k;
    if (!known) throw ConfigError("unknown config key '" + it.key() + "'");
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interpretable risk scoring: EBM, L1 logistic regression, tree baselines, fairness"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool include_test = false;
  bool deterministic_fairness = false;
  app.add_option("--config", config_path, "Run configuration (JSON); a manifest.json repeats its run");
  app.add_option("--seed", seed, "Seed (generator seed for synth, run seed otherwise)");
  app.add_option("--out", out_dir, "Output directory (default $INTERPRISK_OUT or ./out)");
  app.add_flag("--include-test", include_test, "Evaluate the quarantined test fold");
  app.add_flag("--deterministic-fairness", deterministic_fairness, "Use single thresholds instead of mixtures");

  std::string model_kind, model_file;
  std::optional<std::size_t> row;
  bool global = false;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset with known risk");
  auto* train = app.add_subcommand("train", "Train one model");
  train->add_option("--model", model_kind, "ebm, lr, gb, xgb, rf (or linear, gbdt, forest)");
  auto* cv = app.add_subcommand("cv", "Moving-window cross-validation of the model roster");
  auto* sparsify = app.add_subcommand("sparsify", "Backward selection of EBM main effects");
  auto* smooth = app.add_subcommand("smooth", "Smoothing-spline post-processing of EBM shapes");
  auto* fairness = app.add_subcommand("fairness", "Group reports and FPR equalization");
  auto* explain = app.add_subcommand("explain", "Local or global explanation of an EBM");
  explain->add_option("--model-file", model_file, "Model file written by train");
  explain->add_option("--row", row, "Row index of the dataset to explain");
  explain->add_flag("--global", global, "Emit term importances instead");
  auto* sweep = app.add_subcommand("sweep", "Grid sweep over model specifications");
  (void)synth, (void)cv, (void)sparsify, (void)smooth, (void)fairness, (void)sweep;

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    RunContext ctx;
    ctx.command = app.get_subcommands().front()->get_name();
    ctx.log = &out;
    json cfg = config_path.empty() ? json::object() : load_config(config_path);
    check_keys(cfg);
    if (!cfg.contains("data")) cfg["data"] = {{"synth", "default"}};
    if (seed) {
      if (ctx.command == "synth") {
        cfg["data"]["synth_seed"] = *seed;
      } else {
        cfg["seed"] = *seed;
      }
    }
    if (!cfg.contains("seed")) cfg["seed"] = 0;
    if (include_test) cfg["include_test"] = true;
    if (deterministic_fairness) cfg["deterministic_fairness"] = true;
    if (!cfg.contains("include_test")) cfg["include_test"] = false;
    if (!cfg.contains("deterministic_fairness")) cfg["deterministic_fairness"] = false;
    if (!model_kind.empty()) cfg["model"] = {{"model", model_kind}};
    if (!model_file.empty()) cfg["explain"]["model_file"] = model_file;
    if (row) cfg["explain"]["row"] = *row;
    if (global) cfg["explain"]["global"] = true;
    ctx.config = std::move(cfg);

    if (!out_dir.empty()) {
      ctx.out_dir = out_dir;
    } else if (const char* env = std::getenv("INTERPRISK_OUT"); env && *env) {
      ctx.out_dir = env;
    } else {
      ctx.out_dir = "out";
    }

    if (ctx.command == "synth") cmd_synth(ctx);
    else if (ctx.command == "train") cmd_train(ctx);
    else if (ctx.command == "cv") cmd_cv(ctx);
    else if (ctx.command == "sparsify") cmd_sparsify(ctx);
    else if (ctx.command == "smooth") cmd_smooth(ctx);
    else if (ctx.command == "fairness") cmd_fairness(ctx);
    else if (ctx.command == "explain") cmd_explain(ctx);
    else cmd_sweep(ctx);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace interprisk::cli
