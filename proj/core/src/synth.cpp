#include "interprisk/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

namespace interprisk {

using json = nlohmann::json;

double eval_piecewise_linear(const std::vector<Knot>& knots, double x) {
  if (knots.empty()) return 0.0;
  if (x <= knots.front().x) return knots.front().y;
  if (x >= knots.back().x) return knots.back().y;
  const auto it = std::upper_bound(knots.begin(), knots.end(), x,
                                   [](double v, const Knot& k) { return v < k.x; });
  const Knot& hi = *it;
  const Knot& lo = *(it - 1);
  const double t = (x - lo.x) / (hi.x - lo.x);
  return lo.y + t * (hi.y - lo.y);
}

namespace {

std::vector<Knot> knots(std::initializer_list<std::pair<double, double>> pts) {
  std::vector<Knot> out;
  for (auto [x, y] : pts) out.push_back({x, y});
  return out;
}

SynthFeature numeric(std::string name, NumericDistribution dist, std::vector<Knot> shape) {
  SynthFeature f;
  f.name = std::move(name);
  f.kind = ColumnKind::kNumeric;
  f.distribution = dist;
  f.shape = std::move(shape);
  return f;
}

SynthFeature categorical(std::string name, std::vector<std::string> cats, std::vector<double> probs,
                         std::vector<double> effects) {
  SynthFeature f;
  f.name = std::move(name);
  f.kind = ColumnKind::kCategorical;
  f.categories = std::move(cats);
  f.probabilities = std::move(probs);
  f.effects = std::move(effects);
  return f;
}

NumericDistribution uniform(double lo, double hi) {
  return {NumericDistribution::Type::kUniform, lo, hi};
}
NumericDistribution integer(double lo, double hi) {
  return {NumericDistribution::Type::kInteger, lo, hi};
}

}  // namespace

SynthConfig default_synth_config() {
  using T = NumericDistribution::Type;
  SynthConfig c;
  c.intercept = -2.9;
  c.features = {
      numeric("age", integer(15, 65), knots({{15, -0.45}, {30, -0.2}, {45, 0.15}, {55, 0.45}, {65, 0.7}})),
      numeric("insured_income",
              {T::kLogNormal, std::log(4800.0), 0.45, 800.0, 16000.0},
              knots({{800, 0.55}, {2500, 0.35}, {4000, 0.15}, {5000, -0.15}, {6000, -0.25},
                     {9000, 0.05}, {16000, 0.25}})),
      numeric("desired_employment_rate", integer(20, 100), knots({{20, 0.35}, {50, 0.1}, {100, -0.15}})),
      numeric("months_prev_contributions", integer(0, 24), knots({{0, 0.55}, {12, 0.05}, {24, -0.3}})),
      numeric("prev_employment_rate", uniform(0, 100), knots({{0, 0.25}, {60, 0.0}, {100, -0.2}})),
      numeric("n_prior_spells", integer(0, 6), knots({{0, -0.2}, {6, 0.45}})),
      numeric("days_to_registration", {T::kLogNormal, std::log(20.0), 0.8, 0.0, 365.0},
              knots({{0, -0.1}, {30, 0.0}, {120, 0.25}, {365, 0.3}})),
      numeric("n_children", integer(0, 4), knots({{0, 0.0}, {4, 0.2}})),
      numeric("search_radius_km", uniform(5, 100), knots({{5, 0.15}, {100, -0.1}})),
      numeric("noise_numeric", {T::kNormal, 0.0, 1.0}, {}),
      categorical("education", {"compulsory", "vocational", "upper_secondary", "tertiary"},
                  {0.25, 0.45, 0.1, 0.2}, {0.35, 0.0, -0.05, -0.25}),
      categorical("language_skills", {"none", "basic", "fluent", "native"}, {0.08, 0.22, 0.3, 0.4},
                  {0.5, 0.25, 0.0, -0.1}),
      categorical("job_sector",
                  {"construction", "hospitality", "retail", "manufacturing", "health", "finance", "it",
                   "other"},
                  {0.15, 0.12, 0.15, 0.15, 0.12, 0.08, 0.08, 0.15},
                  {0.1, 0.3, 0.15, 0.05, -0.2, 0.1, -0.15, 0.0}),
      categorical("region", {"lake_geneva", "espace_mittelland", "northwest", "zurich", "eastern", "central",
                             "ticino"},
                  {0.18, 0.2, 0.13, 0.2, 0.13, 0.1, 0.06}, {0.2, 0.0, 0.0, -0.05, -0.1, -0.15, 0.25}),
      categorical("gender", {"female", "male"}, {0.45, 0.55}, {0.05, 0.0}),
      categorical("nationality", {"swiss", "eu", "non_eu"}, {0.55, 0.3, 0.15}, {0.0, 0.1, 0.3}),
      categorical("contract_type", {"permanent", "temporary", "none"}, {0.6, 0.3, 0.1}, {-0.1, 0.1, 0.35}),
      categorical("mode_of_work", {"full_time", "part_time"}, {0.75, 0.25}, {0.0, 0.15}),
      categorical("marital_status", {"single", "married", "divorced", "widowed"}, {0.45, 0.4, 0.12, 0.03},
                  {0.0, -0.05, 0.15, 0.2}),
      categorical("noise_category", {"a", "b", "c"}, {0.3, 0.3, 0.4}, {0.0, 0.0, 0.0}),
  };
  c.features[1].missing_rate = 0.02;
  c.features[1].missing_effect = 0.3;
  // Effects above are relative; the scale puts the Bayes AUC near 0.77.
  const double scale = 1.5;
  for (auto& f : c.features) {
    for (auto& k : f.shape) k.y *= scale;
    for (auto& e : f.effects) e *= scale;
    f.missing_effect *= scale;
  }

  c.interactions = {
      {0.5,
       {{"age", knots({{15, -1.0}, {40, 0.0}, {65, 1.0}}), {}},
        {"insured_income", knots({{800, -1.0}, {5000, 0.0}, {16000, 1.0}}), {}}}},
      {0.4, {{"education", {}, {1.0, 0.3, 0.0, -0.5}}, {"language_skills", {}, {1.0, 0.5, 0.0, -0.2}}}},
      {0.35,
       {{"prev_employment_rate", knots({{0, 1.0}, {100, -1.0}}), {}},
        {"months_prev_contributions", knots({{0, 1.0}, {24, -1.0}}), {}}}},
  };

  SynthGroup g;
  g.name = "age_band";
  g.source = "age";
  g.edges = {15, 30, 45, 65};
  g.labels = {"15-29", "30-44", "45-65"};
  g.offsets = {-0.15, 0.0, 0.15};
  c.group = g;

  c.drift = {{2014, 0.0}, {2015, -0.02}, {2016, -0.04}, {2017, -0.05}, {2018, -0.07}, {2019, -0.15}};
  return c;
}

SynthConfig signal_noise_config(int informative, int noise, std::size_t n_per_year, std::uint64_t seed) {
  SynthConfig c;
  c.n_per_year = n_per_year;
  c.seed = seed;
  c.intercept = -1.4;
  for (int i = 0; i < informative; ++i) {
    const double amp = 1.0 - 0.1 * (i % 5);
    std::vector<Knot> shape;
    switch (i % 3) {
      case 0: shape = knots({{-1, -amp}, {1, amp}}); break;
      case 1: shape = knots({{-1, amp}, {0, -amp}, {1, amp}}); break;
      default: shape = knots({{-1, -amp}, {-0.2, -amp}, {0.2, amp}, {1, amp}}); break;
    }
    c.features.push_back(numeric("signal_" + std::to_string(i), uniform(-1, 1), std::move(shape)));
  }
  for (int i = 0; i < noise; ++i) {
    c.features.push_back(numeric("noise_" + std::to_string(i), uniform(-1, 1), {}));
  }
  return c;
}

namespace {

std::string_view dist_name(NumericDistribution::Type t) {
  switch (t) {
    case NumericDistribution::Type::kUniform: return "uniform";
    case NumericDistribution::Type::kNormal: return "normal";
    case NumericDistribution::Type::kLogNormal: return "lognormal";
    case NumericDistribution::Type::kInteger: return "integer";
  }
  return "uniform";
}

NumericDistribution::Type parse_dist(const std::string& s) {
  if (s == "uniform") return NumericDistribution::Type::kUniform;
  if (s == "normal") return NumericDistribution::Type::kNormal;
  if (s == "lognormal") return NumericDistribution::Type::kLogNormal;
  if (s == "integer") return NumericDistribution::Type::kInteger;
  throw ConfigError("unknown distribution '" + s + "'");
}

json knots_json(const std::vector<Knot>& ks) {
  json out = json::array();
  for (const auto& k : ks) out.push_back(json::array({k.x, k.y}));
  return out;
}

std::vector<Knot> knots_from(const json& j) {
  std::vector<Knot> out;
  for (const auto& p : j) out.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return out;
}

// JSON has no infinities; unbounded clips are omitted.
void put_finite(json& j, const char* key, double v) {
  if (std::isfinite(v)) j[key] = v;
}

}  // namespace

std::string synth_config_to_json(const SynthConfig& c) {
  json j;
  j["years"] = {c.first_year, c.last_year};
  j["n_per_year"] = c.n_per_year;
  j["seed"] = c.seed;
  j["intercept"] = c.intercept;
  j["outcome"] = c.outcome_name;
  j["time"] = c.time_name;
  json feats = json::array();
  for (const auto& f : c.features) {
    json jf = {{"name", f.name}, {"kind", to_string(f.kind)}};
    if (f.kind == ColumnKind::kNumeric) {
      json d = {{"type", dist_name(f.distribution.type)}, {"a", f.distribution.a}, {"b", f.distribution.b}};
      put_finite(d, "clip_low", f.distribution.clip_low);
      put_finite(d, "clip_high", f.distribution.clip_high);
      jf["distribution"] = d;
      jf["shape"] = knots_json(f.shape);
    } else {
      jf["categories"] = f.categories;
      jf["probabilities"] = f.probabilities;
      jf["effects"] = f.effects;
    }
    if (f.missing_rate > 0) {
      jf["missing_rate"] = f.missing_rate;
      jf["missing_effect"] = f.missing_effect;
    }
    feats.push_back(std::move(jf));
  }
  j["features"] = feats;
  json inters = json::array();
  for (const auto& t : c.interactions) {
    json factors = json::array();
    for (const auto& f : t.factors) {
      json jf = {{"feature", f.feature}};
      if (!f.knots.empty()) jf["knots"] = knots_json(f.knots);
      if (!f.values.empty()) jf["values"] = f.values;
      factors.push_back(std::move(jf));
    }
    inters.push_back({{"coefficient", t.coefficient}, {"factors", factors}});
  }
  j["interactions"] = inters;
  if (c.group) {
    const auto& g = *c.group;
    json jg = {{"name", g.name}, {"labels", g.labels}, {"offsets", g.offsets}};
    if (!g.source.empty()) {
      jg["source"] = g.source;
      jg["edges"] = g.edges;
    } else {
      jg["probabilities"] = g.probabilities;
    }
    j["group"] = jg;
  }
  json drift = json::object();
  for (auto [year, off] : c.drift) drift[std::to_string(year)] = off;
  j["drift"] = drift;
  return j.dump(2) + "\n";
}

SynthConfig synth_config_from_json(std::string_view text) {
  SynthConfig c;
  try {
    const json j = json::parse(text);
    if (j.contains("years")) {
      c.first_year = j["years"].at(0).get<int>();
      c.last_year = j["years"].at(1).get<int>();
    }
    c.n_per_year = j.value("n_per_year", c.n_per_year);
    c.seed = j.value("seed", c.seed);
    c.intercept = j.value("intercept", 0.0);
    c.outcome_name = j.value("outcome", c.outcome_name);
    c.time_name = j.value("time", c.time_name);
    for (const auto& jf : j.at("features")) {
      SynthFeature f;
      f.name = jf.at("name").get<std::string>();
      f.kind = parse_column_kind(jf.value("kind", std::string("numeric")));
      if (f.kind == ColumnKind::kNumeric) {
        const auto& d = jf.at("distribution");
        f.distribution.type = parse_dist(d.value("type", std::string("uniform")));
        f.distribution.a = d.value("a", 0.0);
        f.distribution.b = d.value("b", 1.0);
        if (d.contains("clip_low")) f.distribution.clip_low = d["clip_low"].get<double>();
        if (d.contains("clip_high")) f.distribution.clip_high = d["clip_high"].get<double>();
        if (jf.contains("shape")) f.shape = knots_from(jf["shape"]);
      } else {
        f.categories = jf.at("categories").get<std::vector<std::string>>();
        f.probabilities = jf.at("probabilities").get<std::vector<double>>();
        f.effects = jf.value("effects", std::vector<double>(f.categories.size(), 0.0));
      }
      f.missing_rate = jf.value("missing_rate", 0.0);
      f.missing_effect = jf.value("missing_effect", 0.0);
      c.features.push_back(std::move(f));
    }
    if (j.contains("interactions")) {
      for (const auto& jt : j["interactions"]) {
        SynthInteraction t;
        t.coefficient = jt.at("coefficient").get<double>();
        for (const auto& jf : jt.at("factors")) {
          SynthFactor f;
          f.feature = jf.at("feature").get<std::string>();
          if (jf.contains("knots")) f.knots = knots_from(jf["knots"]);
          if (jf.contains("values")) f.values = jf["values"].get<std::vector<double>>();
          t.factors.push_back(std::move(f));
        }
        c.interactions.push_back(std::move(t));
      }
    }
    if (j.contains("group") && !j["group"].is_null()) {
      const auto& jg = j["group"];
      SynthGroup g;
      g.name = jg.at("name").get<std::string>();
      g.labels = jg.at("labels").get<std::vector<std::string>>();
      g.offsets = jg.value("offsets", std::vector<double>(g.labels.size(), 0.0));
      g.source = jg.value("source", std::string());
      if (jg.contains("edges")) g.edges = jg["edges"].get<std::vector<double>>();
      if (jg.contains("probabilities")) g.probabilities = jg["probabilities"].get<std::vector<double>>();
      c.group = g;
    }
    if (j.contains("drift")) {
      for (const auto& [k, v] : j["drift"].items()) c.drift[std::stoi(k)] = v.get<double>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("synth config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("synth config: ") + e.what());
  }
  validate(c);
  return c;
}

namespace {

const SynthFeature* find_feature(const SynthConfig& c, const std::string& name) {
  for (const auto& f : c.features) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

void check_knots(const std::vector<Knot>& ks, const std::string& where) {
  for (std::size_t i = 1; i < ks.size(); ++i) {
    if (!(ks[i].x > ks[i - 1].x)) throw ConfigError(where + ": knot abscissae must increase");
  }
}

void check_probabilities(const std::vector<double>& p, std::size_t n, const std::string& where) {
  if (p.size() != n) throw ConfigError(where + ": expected " + std::to_string(n) + " probabilities");
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0)) throw ConfigError(where + ": negative probability");
    total += v;
  }
  if (!(total > 0)) throw ConfigError(where + ": probabilities sum to zero");
}

std::size_t sample_index(Rng& rng, const std::vector<double>& weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return weights.size() - 1;
}

double draw_numeric(Rng& rng, const NumericDistribution& d) {
  double v = 0.0;
  switch (d.type) {
    case NumericDistribution::Type::kUniform: v = rng.uniform(d.a, d.b); break;
    case NumericDistribution::Type::kNormal: v = d.a + d.b * rng.normal(); break;
    case NumericDistribution::Type::kLogNormal: v = std::exp(d.a + d.b * rng.normal()); break;
    case NumericDistribution::Type::kInteger: {
      const auto lo = static_cast<long long>(std::ceil(d.a));
      const auto hi = static_cast<long long>(std::floor(d.b));
      v = static_cast<double>(lo + static_cast<long long>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))));
      break;
    }
  }
  return std::clamp(v, d.clip_low, d.clip_high);
}

double factor_value(const SynthFactor& f, const SynthFeature& feat, double cell) {
  if (is_missing(cell)) return 0.0;
  if (feat.kind == ColumnKind::kNumeric) return eval_piecewise_linear(f.knots, cell);
  return f.values[static_cast<std::size_t>(cell)];
}

std::size_t group_of(const SynthGroup& g, double source_value) {
  const std::size_t bands = g.labels.size();
  for (std::size_t k = 1; k < bands; ++k) {
    if (source_value < g.edges[k]) return k - 1;
  }
  return bands - 1;
}

bool has_signal(const SynthConfig& c) {
  for (const auto& f : c.features) {
    for (const auto& k : f.shape) {
      if (k.y != f.shape.front().y) return true;
    }
    for (double e : f.effects) {
      if (e != f.effects.front()) return true;
    }
    if (f.missing_rate > 0 && f.missing_effect != 0) return true;
  }
  for (const auto& t : c.interactions) {
    if (t.coefficient != 0) return true;
  }
  if (c.group) {
    for (double o : c.group->offsets) {
      if (o != c.group->offsets.front()) return true;
    }
  }
  return false;
}

}  // namespace

void validate(const SynthConfig& c) {
  if (c.last_year < c.first_year) throw ConfigError("synth config: years must be increasing");
  if (c.n_per_year == 0) throw ConfigError("synth config: n_per_year must be positive");
  if (c.features.empty()) throw ConfigError("synth config: no features");
  std::set<std::string> names{c.outcome_name, c.time_name};
  if (names.size() != 2) throw ConfigError("synth config: outcome and time names must differ");
  for (const auto& f : c.features) {
    if (!names.insert(f.name).second) throw ConfigError("synth config: duplicate column '" + f.name + "'");
    if (!(f.missing_rate >= 0 && f.missing_rate < 1)) {
      throw ConfigError("synth config: missing_rate of '" + f.name + "' must be in [0,1)");
    }
    if (f.kind == ColumnKind::kNumeric) {
      check_knots(f.shape, f.name);
      if (f.distribution.type != NumericDistribution::Type::kNormal &&
          f.distribution.type != NumericDistribution::Type::kLogNormal && f.distribution.b < f.distribution.a) {
        throw ConfigError("synth config: '" + f.name + "' has an empty range");
      }
    } else {
      if (f.categories.empty()) throw ConfigError("synth config: '" + f.name + "' has no categories");
      check_probabilities(f.probabilities, f.categories.size(), f.name);
      if (f.effects.size() != f.categories.size()) {
        throw ConfigError("synth config: '" + f.name + "' needs one effect per category");
      }
    }
  }
  for (const auto& t : c.interactions) {
    if (t.factors.size() < 2) throw ConfigError("synth config: interaction needs at least two factors");
    for (const auto& f : t.factors) {
      const auto* feat = find_feature(c, f.feature);
      if (!feat) throw ConfigError("synth config: interaction references unknown feature '" + f.feature + "'");
      if (feat->kind == ColumnKind::kNumeric) {
        check_knots(f.knots, "interaction factor " + f.feature);
      } else if (f.values.size() != feat->categories.size()) {
        throw ConfigError("synth config: interaction factor '" + f.feature + "' needs one value per category");
      }
    }
  }
  if (c.group) {
    const auto& g = *c.group;
    if (!names.insert(g.name).second) throw ConfigError("synth config: duplicate column '" + g.name + "'");
    if (g.labels.empty()) throw ConfigError("synth config: group needs labels");
    if (g.offsets.size() != g.labels.size()) throw ConfigError("synth config: one offset per group label");
    if (!g.source.empty()) {
      const auto* src = find_feature(c, g.source);
      if (!src || src->kind != ColumnKind::kNumeric) {
        throw ConfigError("synth config: group source must be a numeric feature");
      }
      if (g.edges.size() != g.labels.size() + 1) throw ConfigError("synth config: group needs labels+1 edges");
    } else {
      check_probabilities(g.probabilities, g.labels.size(), "group " + g.name);
    }
  }
}

Schema synth_schema(const SynthConfig& c) {
  std::vector<ColumnSpec> cols;
  for (const auto& f : c.features) {
    cols.push_back({f.name, f.kind, f.categories, ColumnRole::kFeature});
  }
  if (c.group) cols.push_back({c.group->name, ColumnKind::kCategorical, c.group->labels, ColumnRole::kGroup});
  cols.push_back({c.outcome_name, ColumnKind::kNumeric, {}, ColumnRole::kOutcome});
  cols.push_back({c.time_name, ColumnKind::kNumeric, {}, ColumnRole::kTime});
  return Schema(std::move(cols));
}

double true_logit(const SynthConfig& c, const Dataset& data, std::size_t row) {
  const auto& schema = data.schema();
  double z = c.intercept;
  if (auto it = c.drift.find(data.years()[row]); it != c.drift.end()) z += it->second;
  for (const auto& f : c.features) {
    const double v = data.cell(schema.require(f.name), row);
    if (is_missing(v)) {
      z += f.missing_effect;
    } else if (f.kind == ColumnKind::kNumeric) {
      z += eval_piecewise_linear(f.shape, v);
    } else {
      z += f.effects[static_cast<std::size_t>(v)];
    }
  }
  for (const auto& t : c.interactions) {
    double prod = t.coefficient;
    for (const auto& fac : t.factors) {
      prod *= factor_value(fac, *find_feature(c, fac.feature), data.cell(schema.require(fac.feature), row));
    }
    z += prod;
  }
  if (c.group) {
    const double g = data.cell(schema.require(c.group->name), row);
    z += c.group->offsets[static_cast<std::size_t>(g)];
  }
  return z;
}

SynthResult synthesize(const SynthConfig& c) {
  validate(c);
  const Schema schema = synth_schema(c);
  const std::size_t years = static_cast<std::size_t>(c.last_year - c.first_year + 1);
  const std::size_t n = years * c.n_per_year;

  std::vector<std::vector<double>> columns(schema.size());
  for (std::size_t col = 0; col < schema.size(); ++col) {
    if (col != schema.outcome_index() && col != schema.time_index()) columns[col].resize(n);
  }
  std::vector<std::uint8_t> outcome(n);
  std::vector<int> year_of(n);

  std::vector<std::size_t> feature_col;
  for (const auto& f : c.features) feature_col.push_back(schema.require(f.name));
  std::optional<std::size_t> group_col, source_feature;
  if (c.group) {
    group_col = schema.require(c.group->name);
    if (!c.group->source.empty()) {
      for (std::size_t i = 0; i < c.features.size(); ++i) {
        if (c.features[i].name == c.group->source) source_feature = i;
      }
    }
  }

  Rng rng(c.seed);
  std::size_t row = 0;
  for (int year = c.first_year; year <= c.last_year; ++year) {
    for (std::size_t i = 0; i < c.n_per_year; ++i, ++row) {
      year_of[row] = year;
      for (std::size_t k = 0; k < c.features.size(); ++k) {
        const auto& f = c.features[k];
        // Always consume the draws so missingness does not shift the stream.
        const double miss = rng.uniform();
        double v = f.kind == ColumnKind::kNumeric ? draw_numeric(rng, f.distribution)
                                                  : static_cast<double>(sample_index(rng, f.probabilities));
        if (miss < f.missing_rate) v = kMissing;
        columns[feature_col[k]][row] = v;
      }
      if (c.group) {
        std::size_t g = 0;
        if (source_feature) {
          const double src = columns[feature_col[*source_feature]][row];
          g = is_missing(src) ? 0 : group_of(*c.group, src);
        } else {
          g = sample_index(rng, c.group->probabilities);
        }
        columns[*group_col][row] = static_cast<double>(g);
      }
    }
  }

  // Outcomes are drawn after all features so the logit can be recomputed
  // from the finished table.
  Dataset features(schema, columns, std::vector<std::uint8_t>(n, 0), year_of);
  SynthResult result;
  result.true_logit.resize(n);
  result.true_probability.resize(n);
  Rng outcome_rng(mix_seed(c.seed, 0xD1CE));
  for (std::size_t r = 0; r < n; ++r) {
    const double z = true_logit(c, features, r);
    result.true_logit[r] = z;
    result.true_probability[r] = sigmoid(z);
    outcome[r] = outcome_rng.uniform() < result.true_probability[r] ? 1 : 0;
  }
  if (!has_signal(c)) result.warnings.push_back("degenerate configuration: the true logit is constant");
  result.data = Dataset(schema, std::move(columns), std::move(outcome), std::move(year_of));
  return result;
}

}  // namespace interprisk
