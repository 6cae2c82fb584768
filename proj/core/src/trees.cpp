#include "interprisk/trees.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace interprisk {

void GbdtParams::validate() const {
  if (n_estimators < 0) throw ConfigError("gbdt: n_estimators must be >= 0");
  if (!(learning_rate > 0)) throw ConfigError("gbdt: learning_rate must be > 0");
  if (max_depth < 1) throw ConfigError("gbdt: max_depth must be >= 1");
  if (!(reg_lambda >= 0)) throw ConfigError("gbdt: reg_lambda must be >= 0");
  if (!(min_child_weight >= 0)) throw ConfigError("gbdt: min_child_weight must be >= 0");
}

void ForestParams::validate() const {
  if (n_estimators < 0) throw ConfigError("forest: n_estimators must be >= 0");
  if (max_depth < 1) throw ConfigError("forest: max_depth must be >= 1");
  if (max_features < 1) throw ConfigError("forest: max_features must be >= 1");
  if (!(min_samples_leaf >= 0)) throw ConfigError("forest: min_samples_leaf must be >= 0");
}

namespace {

inline bool goes_left(const TreeNode& n, int bin) {
  if (bin == n.missing_bin) return n.default_left;
  if (!n.left_categories.empty()) return n.left_categories[static_cast<std::size_t>(bin)] != 0;
  return bin <= n.threshold_bin;
}

}  // namespace

double Tree::eval(std::span<const int> bins) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(goes_left(n, bins[static_cast<std::size_t>(n.feature)]) ? n.left : n.right);
  }
  return nodes[i].value;
}

namespace {

double eval_row(const Tree& tree, const BinnedDataset& data, std::size_t row) {
  std::size_t i = 0;
  while (!tree.nodes[i].is_leaf()) {
    const auto& n = tree.nodes[i];
    const int bin = data.codes(static_cast<std::size_t>(n.feature))[row];
    i = static_cast<std::size_t>(goes_left(n, bin) ? n.left : n.right);
  }
  return tree.nodes[i].value;
}

// Both tree kinds maximise sum G^2/(H+lambda) over the children. With
// g = weight*y, h = weight and lambda = 0 this is the Gini decrease of a
// binary split (up to a factor 2), and G/H is the leaf class frequency.
struct BuildConfig {
  bool boosted = true;
  int max_depth = 6;
  double lambda = 0.0;
  double min_cover = 1.0;
  int max_features = 0;  // 0: all features
};

class TreeBuilder {
 public:
  TreeBuilder(const BinnedDataset& data, const BuildConfig& cfg, const std::vector<double>& g,
              const std::vector<double>& h, Rng* rng)
      : data_(data), cfg_(cfg), g_(g), h_(h), rng_(rng) {
    std::size_t max_bins = 0;
    for (const auto& f : data.layout()) max_bins = std::max(max_bins, static_cast<std::size_t>(f.total_bins()));
    hist_g_.resize(max_bins);
    hist_h_.resize(max_bins);
    features_.resize(data.features());
    std::iota(features_.begin(), features_.end(), std::size_t{0});
  }

  Tree build(std::vector<std::uint32_t> rows) {
    rows_ = std::move(rows);
    tree_ = Tree{};
    double G = 0.0, H = 0.0;
    for (auto r : rows_) {
      G += g_[r];
      H += h_[r];
    }
    grow(0, rows_.size(), 0, G, H);
    return std::move(tree_);
  }

 private:
  struct Split {
    double gain = 0.0;
    std::size_t feature = 0;
    int threshold = 0;
    std::vector<std::uint8_t> left_categories;
    bool default_left = true;
    double gl = 0, hl = 0, gr = 0, hr = 0;
  };

  double score(double g, double h) const { return h + cfg_.lambda > 0 ? g * g / (h + cfg_.lambda) : 0.0; }

  double leaf_value(double g, double h) const {
    if (cfg_.boosted) return h + cfg_.lambda > 0 ? -g / (h + cfg_.lambda) : 0.0;
    return h > 0 ? g / h : 0.0;
  }

  void consider(Split& best, std::size_t f, double G, double H, double gl, double hl, double gm, double hm,
                double parent) {
    const double hr0 = H - hl - hm;
    const bool miss_left = hl >= hr0;
    const double gL = miss_left ? gl + gm : gl, hL = miss_left ? hl + hm : hl;
    const double gR = G - gL, hR = H - hL;
    if (hL < cfg_.min_cover || hR < cfg_.min_cover || hL <= 0 || hR <= 0) return;
    const double gain = score(gL, hL) + score(gR, hR) - parent;
    if (gain > best.gain + 1e-12 * std::max(1.0, parent)) {
      best.gain = gain;
      best.feature = f;
      best.default_left = miss_left;
      best.gl = gL;
      best.hl = hL;
      best.gr = gR;
      best.hr = hR;
      best.left_categories.clear();
      best.threshold = -1;
    }
  }

  Split find_split(std::size_t begin, std::size_t end, double G, double H) {
    Split best;
    const double parent = score(G, H);
    std::size_t n_try = features_.size();
    if (cfg_.max_features > 0 && static_cast<std::size_t>(cfg_.max_features) < n_try) {
      n_try = static_cast<std::size_t>(cfg_.max_features);
      for (std::size_t i = 0; i < n_try; ++i) {
        const auto j = i + static_cast<std::size_t>(rng_->below(features_.size() - i));
        std::swap(features_[i], features_[j]);
      }
    }
    std::vector<std::size_t> tried(features_.begin(), features_.begin() + static_cast<std::ptrdiff_t>(n_try));
    std::sort(tried.begin(), tried.end());

    for (std::size_t f : tried) {
      const auto& bins = data_.layout()[f];
      const int total = bins.total_bins();
      const int regular = bins.regular_bins();
      std::fill_n(hist_g_.begin(), total, 0.0);
      std::fill_n(hist_h_.begin(), total, 0.0);
      const auto codes = data_.codes(f);
      for (std::size_t k = begin; k < end; ++k) {
        const auto r = rows_[k];
        hist_g_[codes[r]] += g_[r];
        hist_h_[codes[r]] += h_[r];
      }
      const double gm = hist_g_[static_cast<std::size_t>(regular)];
      const double hm = hist_h_[static_cast<std::size_t>(regular)];

      if (bins.kind == ColumnKind::kNumeric) {
        double gl = 0.0, hl = 0.0;
        for (int t = 0; t + 1 < regular; ++t) {
          gl += hist_g_[static_cast<std::size_t>(t)];
          hl += hist_h_[static_cast<std::size_t>(t)];
          const double before = best.gain;
          consider(best, f, G, H, gl, hl, gm, hm, parent);
          if (best.gain != before) best.threshold = t;
        }
      } else {
        std::vector<int> seen;
        for (int b = 0; b < regular; ++b) {
          if (hist_h_[static_cast<std::size_t>(b)] > 0) seen.push_back(b);
        }
        std::stable_sort(seen.begin(), seen.end(), [&](int x, int y) {
          const auto ux = static_cast<std::size_t>(x), uy = static_cast<std::size_t>(y);
          return hist_g_[ux] / (hist_h_[ux] + cfg_.lambda) < hist_g_[uy] / (hist_h_[uy] + cfg_.lambda);
        });
        double gl = 0.0, hl = 0.0;
        for (std::size_t k = 0; k + 1 < seen.size(); ++k) {
          gl += hist_g_[static_cast<std::size_t>(seen[k])];
          hl += hist_h_[static_cast<std::size_t>(seen[k])];
          const double before = best.gain;
          consider(best, f, G, H, gl, hl, gm, hm, parent);
          if (best.gain != before) {
            // Bins never seen in this node follow the missing direction.
            best.left_categories.assign(static_cast<std::size_t>(total), best.default_left ? 1 : 0);
            for (int b = 0; b < regular; ++b) {
              if (hist_h_[static_cast<std::size_t>(b)] > 0) best.left_categories[static_cast<std::size_t>(b)] = 0;
            }
            for (std::size_t q = 0; q <= k; ++q) best.left_categories[static_cast<std::size_t>(seen[q])] = 1;
          }
        }
      }
    }
    return best;
  }

  int grow(std::size_t begin, std::size_t end, int depth, double G, double H) {
    const int index = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    tree_.nodes.back().value = leaf_value(G, H);
    if (depth >= cfg_.max_depth || end - begin < 2) return index;
    Split split = find_split(begin, end, G, H);
    if (!(split.gain > 0.0)) return index;

    TreeNode node;
    node.feature = static_cast<int>(split.feature);
    node.threshold_bin = split.threshold;
    node.missing_bin = data_.layout()[split.feature].missing_bin();
    node.left_categories = std::move(split.left_categories);
    node.default_left = split.default_left;
    const auto codes = data_.codes(split.feature);
    const auto mid = std::stable_partition(rows_.begin() + static_cast<std::ptrdiff_t>(begin),
                                           rows_.begin() + static_cast<std::ptrdiff_t>(end),
                                           [&](std::uint32_t r) { return goes_left(node, codes[r]); });
    const auto split_at = static_cast<std::size_t>(mid - rows_.begin());
    node.value = tree_.nodes[static_cast<std::size_t>(index)].value;
    tree_.nodes[static_cast<std::size_t>(index)] = node;
    const int left = grow(begin, split_at, depth + 1, split.gl, split.hl);
    const int right = grow(split_at, end, depth + 1, split.gr, split.hr);
    tree_.nodes[static_cast<std::size_t>(index)].left = left;
    tree_.nodes[static_cast<std::size_t>(index)].right = right;
    return index;
  }

  const BinnedDataset& data_;
  BuildConfig cfg_;
  const std::vector<double>& g_;
  const std::vector<double>& h_;
  Rng* rng_;
  std::vector<std::uint32_t> rows_;
  std::vector<std::size_t> features_;
  std::vector<double> hist_g_, hist_h_;
  Tree tree_;
};

void require_both_classes(const BinnedDataset& data) {
  const auto y = data.outcome();
  if (y.empty()) throw DataError("empty dataset");
  const auto pos = std::count(y.begin(), y.end(), std::uint8_t{1});
  if (pos == 0 || pos == static_cast<std::ptrdiff_t>(y.size())) throw DataError("single-class outcome");
}

}  // namespace

TreeEnsemble train_gbdt(const BinnedDataset& data, const GbdtParams& params) {
  params.validate();
  require_both_classes(data);
  const std::size_t n = data.rows();
  const auto y = data.outcome();

  TreeEnsemble model;
  model.kind = EnsembleKind::kBoosted;
  model.layout = data.layout();
  model.learning_rate = params.learning_rate;
  model.gbdt = params;
  const double prevalence = static_cast<double>(std::count(y.begin(), y.end(), std::uint8_t{1})) / static_cast<double>(n);
  model.base_score = logit(prevalence);

  BuildConfig cfg;
  cfg.boosted = true;
  cfg.max_depth = params.max_depth;
  cfg.lambda = params.reg_lambda;
  cfg.min_cover = params.min_child_weight;

  std::vector<double> f(n, model.base_score), g(n), h(n);
  std::vector<std::uint32_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0u);
  TreeBuilder builder(data, cfg, g, h, nullptr);
  for (int t = 0; t < params.n_estimators; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(f[i]);
      g[i] = p - y[i];
      h[i] = p * (1.0 - p);
    }
    Tree tree = builder.build(rows);
    for (std::size_t i = 0; i < n; ++i) f[i] += params.learning_rate * eval_row(tree, data, i);
    model.trees.push_back(std::move(tree));
  }
  return model;
}

TreeEnsemble train_random_forest(const BinnedDataset& data, const ForestParams& params) {
  params.validate();
  require_both_classes(data);
  const std::size_t n = data.rows();
  const auto y = data.outcome();

  TreeEnsemble model;
  model.kind = EnsembleKind::kForest;
  model.layout = data.layout();
  model.forest = params;
  model.base_score = static_cast<double>(std::count(y.begin(), y.end(), std::uint8_t{1})) / static_cast<double>(n);

  BuildConfig cfg;
  cfg.boosted = false;
  cfg.max_depth = params.max_depth;
  cfg.lambda = 0.0;
  cfg.min_cover = params.min_samples_leaf;
  cfg.max_features = std::min(params.max_features, static_cast<int>(data.features()));

  model.trees.resize(static_cast<std::size_t>(params.n_estimators));
  parallel_for(model.trees.size(), [&](std::size_t t) {
    Rng rng(mix_seed(params.seed, t));
    std::vector<double> w(n, params.bootstrap ? 0.0 : 1.0);
    if (params.bootstrap) {
      for (std::size_t i = 0; i < n; ++i) w[rng.below(n)] += 1.0;
    }
    std::vector<double> g(n);
    std::vector<std::uint32_t> rows;
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = w[i] * y[i];
      if (w[i] > 0) rows.push_back(static_cast<std::uint32_t>(i));
    }
    TreeBuilder builder(data, cfg, g, w, &rng);
    model.trees[t] = builder.build(std::move(rows));
  });
  return model;
}

double predict_ensemble(const TreeEnsemble& model, std::span<const int> bins) {
  if (model.kind == EnsembleKind::kBoosted) {
    double sum = 0.0;
    for (const auto& t : model.trees) sum += t.eval(bins);
    return sigmoid(model.base_score + model.learning_rate * sum);
  }
  if (model.trees.empty()) return model.base_score;
  std::vector<double> outs;
  outs.reserve(model.trees.size());
  for (const auto& t : model.trees) outs.push_back(t.eval(bins));
  std::sort(outs.begin(), outs.end());
  double sum = 0.0;
  for (double v : outs) sum += v;
  return sum / static_cast<double>(outs.size());
}

double predict_ensemble(const TreeEnsemble& model, const Record& row) {
  if (row.values.size() != model.layout.size()) throw ConfigError("record does not match the model's features");
  std::vector<int> bins(row.values.size());
  for (std::size_t f = 0; f < bins.size(); ++f) bins[f] = model.layout[f].bin_of(row.values[f]);
  return predict_ensemble(model, bins);
}

std::vector<double> predict_ensemble(const TreeEnsemble& model, const BinnedDataset& data) {
  if (!(data.layout() == model.layout)) throw ConfigError("dataset is binned with a different layout");
  std::vector<double> out(data.rows());
  std::vector<int> bins(data.features());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (std::size_t f = 0; f < bins.size(); ++f) bins[f] = data.codes(f)[r];
    out[r] = predict_ensemble(model, bins);
  }
  return out;
}

std::vector<double> predict_ensemble(const TreeEnsemble& model, const Dataset& data) {
  return predict_ensemble(model, apply_bins(data, model.layout));
}

}  // namespace interprisk
