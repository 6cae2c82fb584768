#include "interprisk/model_io.hpp"

#include <cmath>
#include <limits>

namespace interprisk {

using json = nlohmann::json;

namespace {

// JSON has no NaN or infinities; they travel as strings.
json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double num(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ConfigError("bad number '" + s + "'");
  }
  return j.get<double>();
}

json nums(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(num(x));
  return out;
}

std::vector<double> nums(const json& j) {
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(num(x));
  return out;
}

json ebm_to_json(const EbmModel& m) {
  json j;
  j["layout"] = layout_to_json(m.layout);
  j["intercept"] = num(m.intercept);
  j["hyperparams"] = ebm_params_to_json(m.hyperparams);
  j["bag_count"] = m.bag_count;
  json mains = json::array();
  for (const auto& s : m.mains) {
    mains.push_back({{"feature", s.feature}, {"scores", nums(s.scores)}, {"bin_weights", nums(s.bin_weights)}});
  }
  j["mains"] = std::move(mains);
  json pairs = json::array();
  for (const auto& t : m.interactions) {
    pairs.push_back({{"first", t.first},
                     {"second", t.second},
                     {"first_blocks", t.first_blocks},
                     {"second_blocks", t.second_blocks},
                     {"block_rows", t.block_rows},
                     {"block_cols", t.block_cols},
                     {"block_scores", nums(t.block_scores)}});
  }
  j["interactions"] = std::move(pairs);
  j["importances"] = nums(m.importances);
  j["info"] = {{"rows", m.info.rows},
               {"prevalence", num(m.info.prevalence)},
               {"main_rounds", m.info.main_rounds},
               {"interaction_rounds", m.info.interaction_rounds},
               {"warnings", m.info.warnings}};
  return j;
}

EbmModel ebm_from_json(const json& j) {
  EbmModel m;
  m.layout = layout_from_json(j.at("layout"));
  m.intercept = num(j.at("intercept"));
  m.hyperparams = ebm_params_from_json(j.at("hyperparams"));
  m.bag_count = j.at("bag_count").get<int>();
  for (const auto& s : j.at("mains")) {
    m.mains.push_back({s.at("feature").get<std::string>(), nums(s.at("scores")), nums(s.at("bin_weights"))});
  }
  if (m.mains.size() != m.layout.size()) throw ConfigError("model: mains do not match the layout");
  for (std::size_t f = 0; f < m.mains.size(); ++f) {
    if (m.mains[f].scores.size() != static_cast<std::size_t>(m.layout[f].total_bins())) {
      throw ConfigError("model: shape '" + m.mains[f].feature + "' does not match its bins");
    }
  }
  for (const auto& t : j.at("interactions")) {
    InteractionTable it;
    it.first = t.at("first").get<std::size_t>();
    it.second = t.at("second").get<std::size_t>();
    it.first_blocks = t.at("first_blocks").get<std::vector<std::uint16_t>>();
    it.second_blocks = t.at("second_blocks").get<std::vector<std::uint16_t>>();
    it.block_rows = t.at("block_rows").get<std::size_t>();
    it.block_cols = t.at("block_cols").get<std::size_t>();
    it.block_scores = nums(t.at("block_scores"));
    if (it.first >= m.layout.size() || it.second >= m.layout.size() ||
        it.block_scores.size() != it.block_rows * it.block_cols) {
      throw ConfigError("model: malformed interaction table");
    }
    for (auto b : it.first_blocks) {
      if (b >= it.block_rows) throw ConfigError("model: interaction block out of range");
    }
    for (auto b : it.second_blocks) {
      if (b >= it.block_cols) throw ConfigError("model: interaction block out of range");
    }
    m.interactions.push_back(std::move(it));
  }
  m.importances = nums(j.at("importances"));
  const auto& info = j.at("info");
  m.info.rows = info.at("rows").get<std::size_t>();
  m.info.prevalence = num(info.at("prevalence"));
  m.info.main_rounds = info.at("main_rounds").get<std::vector<int>>();
  m.info.interaction_rounds = info.at("interaction_rounds").get<std::vector<int>>();
  m.info.warnings = info.at("warnings").get<Warnings>();
  return m;
}

json linear_to_json(const LinearModel& m) {
  json feats = json::array();
  for (const auto& f : m.standardization.features) {
    feats.push_back({{"name", f.name},
                     {"source", f.source},
                     {"kind", to_string(f.kind)},
                     {"category", f.category},
                     {"mean", num(f.mean)},
                     {"stddev", num(f.stddev)}});
  }
  return {{"features", feats},
          {"coefficients", nums(m.coefficients)},
          {"intercept", num(m.intercept)},
          {"l1_strength", num(m.l1_strength)},
          {"nonzero_count", m.nonzero_count},
          {"converged", m.converged},
          {"sweeps", m.sweeps}};
}

LinearModel linear_from_json(const json& j) {
  LinearModel m;
  for (const auto& f : j.at("features")) {
    m.standardization.features.push_back({f.at("name").get<std::string>(), f.at("source").get<std::string>(),
                                          parse_column_kind(f.at("kind").get<std::string>()),
                                          f.at("category").get<std::string>(), num(f.at("mean")),
                                          num(f.at("stddev"))});
  }
  m.coefficients = nums(j.at("coefficients"));
  if (m.coefficients.size() != m.standardization.width()) throw ConfigError("model: coefficient count mismatch");
  m.intercept = num(j.at("intercept"));
  m.l1_strength = num(j.at("l1_strength"));
  m.nonzero_count = j.at("nonzero_count").get<std::size_t>();
  m.converged = j.at("converged").get<bool>();
  m.sweeps = j.at("sweeps").get<int>();
  return m;
}

json trees_to_json(const TreeEnsemble& m) {
  json trees = json::array();
  for (const auto& t : m.trees) {
    json nodes = json::array();
    for (const auto& n : t.nodes) {
      if (n.is_leaf()) {
        nodes.push_back({{"v", num(n.value)}});
        continue;
      }
      json jn = {{"f", n.feature}, {"t", n.threshold_bin}, {"m", n.missing_bin}, {"d", n.default_left},
                 {"v", num(n.value)}, {"l", n.left}, {"r", n.right}};
      if (!n.left_categories.empty()) jn["c"] = n.left_categories;
      nodes.push_back(std::move(jn));
    }
    trees.push_back(std::move(nodes));
  }
  return {{"layout", layout_to_json(m.layout)},
          {"learning_rate", num(m.learning_rate)},
          {"base_score", num(m.base_score)},
          {"gbdt", gbdt_params_to_json(m.gbdt)},
          {"forest", forest_params_to_json(m.forest)},
          {"trees", trees}};
}

TreeEnsemble trees_from_json(const json& j, EnsembleKind kind) {
  TreeEnsemble m;
  m.kind = kind;
  m.layout = layout_from_json(j.at("layout"));
  m.learning_rate = num(j.at("learning_rate"));
  m.base_score = num(j.at("base_score"));
  m.gbdt = gbdt_params_from_json(j.at("gbdt"));
  m.forest = forest_params_from_json(j.at("forest"));
  for (const auto& jt : j.at("trees")) {
    Tree t;
    for (const auto& jn : jt) {
      TreeNode n;
      n.value = num(jn.at("v"));
      if (jn.contains("f")) {
        n.feature = jn.at("f").get<int>();
        n.threshold_bin = jn.at("t").get<int>();
        n.missing_bin = jn.at("m").get<int>();
        n.default_left = jn.at("d").get<bool>();
        n.left = jn.at("l").get<int>();
        n.right = jn.at("r").get<int>();
        if (jn.contains("c")) n.left_categories = jn.at("c").get<std::vector<std::uint8_t>>();
      }
      t.nodes.push_back(std::move(n));
    }
    const auto size = static_cast<int>(t.nodes.size());
    if (size == 0) throw ConfigError("model: empty tree");
    for (const auto& n : t.nodes) {
      if (n.is_leaf()) continue;
      if (n.left <= 0 || n.right <= 0 || n.left >= size || n.right >= size ||
          n.feature >= static_cast<int>(m.layout.size())) {
        throw ConfigError("model: malformed tree");
      }
    }
    m.trees.push_back(std::move(t));
  }
  return m;
}

}  // namespace

json layout_to_json(const BinLayout& layout) {
  json out = json::array();
  for (const auto& f : layout) {
    out.push_back({{"name", f.name},
                   {"kind", to_string(f.kind)},
                   {"cuts", nums(f.cuts)},
                   {"categories", f.categories},
                   {"min", num(f.min_value)},
                   {"max", num(f.max_value)},
                   {"degenerate", f.degenerate}});
  }
  return out;
}

BinLayout layout_from_json(const json& j) {
  BinLayout layout;
  for (const auto& f : j) {
    FeatureBins b;
    b.name = f.at("name").get<std::string>();
    b.kind = parse_column_kind(f.at("kind").get<std::string>());
    b.cuts = nums(f.at("cuts"));
    b.categories = f.at("categories").get<std::vector<std::string>>();
    b.min_value = num(f.at("min"));
    b.max_value = num(f.at("max"));
    b.degenerate = f.at("degenerate").get<bool>();
    for (std::size_t i = 1; i < b.cuts.size(); ++i) {
      if (!(b.cuts[i - 1] < b.cuts[i])) throw ConfigError("layout: cuts of '" + b.name + "' not increasing");
    }
    layout.push_back(std::move(b));
  }
  return layout;
}

json ebm_params_to_json(const EbmHyperparams& hp) {
  return {{"interactions", hp.interactions},
          {"outer_bags", hp.outer_bags},
          {"learning_rate", hp.learning_rate},
          {"min_samples_leaf", hp.min_samples_leaf},
          {"max_leaves", hp.max_leaves},
          {"max_rounds", hp.max_rounds},
          {"early_stop_patience", hp.early_stop_patience},
          {"holdout_fraction", hp.holdout_fraction},
          {"interaction_blocks", hp.interaction_blocks},
          {"seed", hp.seed}};
}

namespace {

template <typename T>
void take(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, std::string_view what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + " parameters must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known |= it.key() == k;
    if (!known) throw ConfigError("unknown " + std::string(what) + " parameter '" + it.key() + "'");
  }
}

}  // namespace

EbmHyperparams ebm_params_from_json(const json& j, EbmHyperparams hp) {
  reject_unknown(j,
                 {"interactions", "outer_bags", "learning_rate", "min_samples_leaf", "max_leaves", "max_rounds",
                  "early_stop_patience", "holdout_fraction", "interaction_blocks", "seed"},
                 "ebm");
  try {
    take(j, "interactions", hp.interactions);
    take(j, "outer_bags", hp.outer_bags);
    take(j, "learning_rate", hp.learning_rate);
    take(j, "min_samples_leaf", hp.min_samples_leaf);
    take(j, "max_leaves", hp.max_leaves);
    take(j, "max_rounds", hp.max_rounds);
    take(j, "early_stop_patience", hp.early_stop_patience);
    take(j, "holdout_fraction", hp.holdout_fraction);
    take(j, "interaction_blocks", hp.interaction_blocks);
    take(j, "seed", hp.seed);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("ebm parameters: ") + e.what());
  }
  hp.validate();
  return hp;
}

json gbdt_params_to_json(const GbdtParams& p) {
  return {{"n_estimators", p.n_estimators}, {"learning_rate", p.learning_rate}, {"max_depth", p.max_depth},
          {"reg_lambda", p.reg_lambda},     {"min_child_weight", p.min_child_weight}, {"seed", p.seed}};
}

GbdtParams gbdt_params_from_json(const json& j, GbdtParams p) {
  reject_unknown(j, {"n_estimators", "learning_rate", "max_depth", "reg_lambda", "min_child_weight", "seed"}, "gbdt");
  try {
    take(j, "n_estimators", p.n_estimators);
    take(j, "learning_rate", p.learning_rate);
    take(j, "max_depth", p.max_depth);
    take(j, "reg_lambda", p.reg_lambda);
    take(j, "min_child_weight", p.min_child_weight);
    take(j, "seed", p.seed);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("gbdt parameters: ") + e.what());
  }
  p.validate();
  return p;
}

json forest_params_to_json(const ForestParams& p) {
  return {{"n_estimators", p.n_estimators}, {"max_depth", p.max_depth},
          {"max_features", p.max_features}, {"bootstrap", p.bootstrap},
          {"min_samples_leaf", p.min_samples_leaf}, {"seed", p.seed}};
}

ForestParams forest_params_from_json(const json& j, ForestParams p) {
  reject_unknown(j, {"n_estimators", "max_depth", "max_features", "bootstrap", "min_samples_leaf", "seed"}, "forest");
  try {
    take(j, "n_estimators", p.n_estimators);
    take(j, "max_depth", p.max_depth);
    take(j, "max_features", p.max_features);
    take(j, "bootstrap", p.bootstrap);
    take(j, "min_samples_leaf", p.min_samples_leaf);
    take(j, "seed", p.seed);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("forest parameters: ") + e.what());
  }
  p.validate();
  return p;
}

std::string model_kind(const AnyModel& model) {
  if (std::holds_alternative<EbmModel>(model)) return "ebm";
  if (std::holds_alternative<LinearModel>(model)) return "linear";
  return std::get<TreeEnsemble>(model).kind == EnsembleKind::kBoosted ? "gbdt" : "forest";
}

std::string model_schema_hash(const AnyModel& model) {
  if (const auto* e = std::get_if<EbmModel>(&model)) return layout_hash(e->layout);
  if (const auto* t = std::get_if<TreeEnsemble>(&model)) return layout_hash(t->layout);
  const auto& l = std::get<LinearModel>(model);
  std::uint64_t h = fnv1a("linear");
  for (const auto& f : l.standardization.features) {
    h = fnv1a(f.name + "\x1f" + f.source + "\x1f" + std::string(to_string(f.kind)) + "\x1e", h);
  }
  return hex64(h);
}

std::string model_to_json(const AnyModel& model) {
  json j;
  j["format"] = "interprisk-model";
  j["version"] = kModelFormatVersion;
  j["kind"] = model_kind(model);
  j["schema_hash"] = model_schema_hash(model);
  if (const auto* e = std::get_if<EbmModel>(&model)) {
    j["model"] = ebm_to_json(*e);
  } else if (const auto* l = std::get_if<LinearModel>(&model)) {
    j["model"] = linear_to_json(*l);
  } else {
    j["model"] = trees_to_json(std::get<TreeEnsemble>(model));
  }
  return j.dump(1) + "\n";
}

AnyModel model_from_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    if (!j.is_object() || j.value("format", "") != "interprisk-model") throw ConfigError("not a model document");
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) throw ConfigError("unsupported model version " + std::to_string(version));
    const auto kind = j.at("kind").get<std::string>();
    AnyModel model;
    if (kind == "ebm") {
      model = ebm_from_json(j.at("model"));
    } else if (kind == "linear") {
      model = linear_from_json(j.at("model"));
    } else if (kind == "gbdt") {
      model = trees_from_json(j.at("model"), EnsembleKind::kBoosted);
    } else if (kind == "forest") {
      model = trees_from_json(j.at("model"), EnsembleKind::kForest);
    } else {
      throw ConfigError("unknown model kind '" + kind + "'");
    }
    if (model_schema_hash(model) != j.at("schema_hash").get<std::string>()) {
      throw ConfigError("model schema hash does not match its contents");
    }
    return model;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model file: ") + e.what());
  }
}

void save_model(const AnyModel& model, const std::filesystem::path& path) {
  write_file_atomic(path, model_to_json(model));
}

AnyModel load_model(const std::filesystem::path& path) { return model_from_json(read_file(path)); }

std::vector<double> predict_scores(const AnyModel& model, const Dataset& data) {
  if (const auto* e = std::get_if<EbmModel>(&model)) return predict_proba(*e, data);
  if (const auto* l = std::get_if<LinearModel>(&model)) return predict_proba(*l, data);
  return predict_ensemble(std::get<TreeEnsemble>(model), data);
}

}  // namespace interprisk
