#include "interprisk/ebm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace interprisk {

void EbmHyperparams::validate() const {
  if (interactions < 0) throw ConfigError("ebm: interactions must be >= 0");
  if (outer_bags < 1) throw ConfigError("ebm: outer_bags must be >= 1");
  if (!(learning_rate > 0)) throw ConfigError("ebm: learning_rate must be > 0");
  if (min_samples_leaf < 1) throw ConfigError("ebm: min_samples_leaf must be >= 1");
  if (max_leaves < 2) throw ConfigError("ebm: max_leaves must be >= 2");
  if (max_rounds < 1) throw ConfigError("ebm: max_rounds must be >= 1");
  if (early_stop_patience < 1) throw ConfigError("ebm: early_stop_patience must be >= 1");
  if (!(holdout_fraction >= 0 && holdout_fraction < 1)) throw ConfigError("ebm: holdout_fraction must be in [0,1)");
  if (interaction_blocks < 2 || interaction_blocks > 1024) {
    throw ConfigError("ebm: interaction_blocks must be in [2, 1024]");
  }
}

double ShapeFunction::weighted_mean() const {
  double total = 0.0;
  double weight = 0.0;
  for (std::size_t b = 0; b < scores.size() && b < bin_weights.size(); ++b) {
    total += scores[b] * bin_weights[b];
    weight += bin_weights[b];
  }
  return weight > 0 ? total / weight : 0.0;
}

std::string EbmModel::term_name(std::size_t term) const {
  if (term < mains.size()) return mains[term].feature;
  const auto& t = interactions.at(term - mains.size());
  return layout[t.first].name + " & " + layout[t.second].name;
}

namespace {

// Sums over axis-aligned rectangles of a rows x cols grid in O(1).
class GridSums {
 public:
  GridSums(int rows, int cols, const double* g, const double* h, const double* w)
      : cols_(cols + 1), g_(Build(rows, cols, g)), h_(Build(rows, cols, h)), w_(Build(rows, cols, w)) {}

  struct Sum {
    double g = 0, h = 0, w = 0;
  };

  Sum rect(int r0, int r1, int c0, int c1) const {
    return {At(g_, r0, r1, c0, c1), At(h_, r0, r1, c0, c1), At(w_, r0, r1, c0, c1)};
  }

 private:
  std::vector<double> Build(int rows, int cols, const double* v) const {
    std::vector<double> p(static_cast<std::size_t>((rows + 1) * (cols + 1)), 0.0);
    for (int r = 0; r < rows; ++r) {
      double run = 0.0;
      for (int c = 0; c < cols; ++c) {
        run += v[r * cols + c];
        p[static_cast<std::size_t>((r + 1) * cols_ + c + 1)] = p[static_cast<std::size_t>(r * cols_ + c + 1)] + run;
      }
    }
    return p;
  }
  double At(const std::vector<double>& p, int r0, int r1, int c0, int c1) const {
    auto idx = [this](int r, int c) { return static_cast<std::size_t>(r * cols_ + c); };
    return p[idx(r1, c1)] - p[idx(r0, c1)] - p[idx(r1, c0)] + p[idx(r0, c0)];
  }

  int cols_;
  std::vector<double> g_, h_, w_;
};

inline double leaf_gain(const GridSums::Sum& s) { return s.g * s.g / (s.h + 1.0); }

// Greedy best-first tree over a grid: every leaf is a rectangle, each split
// cuts one rectangle along one axis. Writes the damped Newton step of every
// leaf into `delta` (rows*cols). Returns false when no leaf moved.
bool fit_grid_tree(int rows, int cols, const double* g, const double* h, const double* w, int max_leaves,
                   double min_leaf, double learning_rate, double* delta) {
  struct Rect {
    int r0, r1, c0, c1;
  };
  const GridSums sums(rows, cols, g, h, w);
  std::vector<Rect> leaves{{0, rows, 0, cols}};

  while (static_cast<int>(leaves.size()) < max_leaves) {
    double best_gain = 0.0;
    std::size_t best_leaf = 0;
    Rect best_a{}, best_b{};
    for (std::size_t li = 0; li < leaves.size(); ++li) {
      const Rect r = leaves[li];
      const auto parent = sums.rect(r.r0, r.r1, r.c0, r.c1);
      const double parent_gain = leaf_gain(parent);
      for (int cut = r.r0 + 1; cut < r.r1; ++cut) {
        const auto lo = sums.rect(r.r0, cut, r.c0, r.c1);
        const GridSums::Sum hi{parent.g - lo.g, parent.h - lo.h, parent.w - lo.w};
        if (lo.w < min_leaf || hi.w < min_leaf) continue;
        const double gain = leaf_gain(lo) + leaf_gain(hi) - parent_gain;
        if (gain > best_gain) {
          best_gain = gain;
          best_leaf = li;
          best_a = {r.r0, cut, r.c0, r.c1};
          best_b = {cut, r.r1, r.c0, r.c1};
        }
      }
      for (int cut = r.c0 + 1; cut < r.c1; ++cut) {
        const auto lo = sums.rect(r.r0, r.r1, r.c0, cut);
        const GridSums::Sum hi{parent.g - lo.g, parent.h - lo.h, parent.w - lo.w};
        if (lo.w < min_leaf || hi.w < min_leaf) continue;
        const double gain = leaf_gain(lo) + leaf_gain(hi) - parent_gain;
        if (gain > best_gain) {
          best_gain = gain;
          best_leaf = li;
          best_a = {r.r0, r.r1, r.c0, cut};
          best_b = {r.r0, r.r1, cut, r.c1};
        }
      }
    }
    if (!(best_gain > 0.0)) break;
    leaves[best_leaf] = best_a;
    leaves.push_back(best_b);
  }

  bool moved = false;
  for (const auto& r : leaves) {
    const auto s = sums.rect(r.r0, r.r1, r.c0, r.c1);
    const double step = s.w > 0 ? -learning_rate * s.g / (s.h + 1.0) : 0.0;
    moved |= step != 0.0;
    for (int i = r.r0; i < r.r1; ++i) {
      for (int j = r.c0; j < r.c1; ++j) delta[i * cols + j] = step;
    }
  }
  return moved;
}

// Maps a feature's bins onto at most max_blocks contiguous blocks of roughly
// equal training count; the missing bin gets its own final block.
std::vector<std::uint16_t> make_blocks(const FeatureBins& bins, std::span<const std::int64_t> counts,
                                       int max_blocks, int& block_count) {
  const int regular = bins.regular_bins();
  std::vector<std::uint16_t> map(static_cast<std::size_t>(bins.total_bins()));
  int blocks = 0;
  if (regular <= max_blocks) {
    for (int b = 0; b < regular; ++b) map[static_cast<std::size_t>(b)] = static_cast<std::uint16_t>(b);
    blocks = regular;
  } else {
    double total = 0.0;
    for (int b = 0; b < regular; ++b) total += static_cast<double>(counts[static_cast<std::size_t>(b)]);
    const double target = total / max_blocks;
    double running = 0.0;
    int current = 0;
    for (int b = 0; b < regular; ++b) {
      map[static_cast<std::size_t>(b)] = static_cast<std::uint16_t>(current);
      running += static_cast<double>(counts[static_cast<std::size_t>(b)]);
      const int remaining_bins = regular - b - 1;
      if (current + 1 < max_blocks && remaining_bins > 0 && running >= target * (current + 1)) ++current;
    }
    blocks = current + 1;
  }
  map[static_cast<std::size_t>(bins.missing_bin())] = static_cast<std::uint16_t>(blocks);
  block_count = blocks + 1;
  return map;
}

struct Term {
  bool pair = false;
  std::size_t a = 0, b = 0;
  int rows = 1, cols = 0;          // grid; mains use one row with the missing bin last
  bool categorical_main = false;
  std::vector<std::uint16_t> fit_cells, hold_cells;
  std::vector<double> scores;      // rows*cols
};

struct Bag {
  std::vector<std::uint32_t> fit_rows, hold_rows;
  std::vector<double> fit_w, hold_w;
  std::vector<std::uint8_t> fit_y, hold_y;
  std::vector<double> fit_logit, hold_logit;
  double intercept = 0.0;
  std::vector<Term> mains, pairs;
  int main_rounds = 0, pair_rounds = 0;
};

double holdout_loss(const Bag& bag) {
  double total = 0.0, weight = 0.0;
  for (std::size_t k = 0; k < bag.hold_logit.size(); ++k) {
    const double z = bag.hold_logit[k];
    // log(1+e^z) - y z, computed stably.
    const double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    total += bag.hold_w[k] * (softplus - (bag.hold_y[k] ? z : 0.0));
    weight += bag.hold_w[k];
  }
  return weight > 0 ? total / weight : 0.0;
}

void recompute_logits(Bag& bag) {
  std::fill(bag.fit_logit.begin(), bag.fit_logit.end(), bag.intercept);
  std::fill(bag.hold_logit.begin(), bag.hold_logit.end(), bag.intercept);
  auto add = [&](const Term& t) {
    for (std::size_t k = 0; k < bag.fit_logit.size(); ++k) bag.fit_logit[k] += t.scores[t.fit_cells[k]];
    for (std::size_t k = 0; k < bag.hold_logit.size(); ++k) bag.hold_logit[k] += t.scores[t.hold_cells[k]];
  };
  for (const auto& t : bag.mains) add(t);
  for (const auto& t : bag.pairs) add(t);
}

// Update for one main term: categorical bins are ordered by gradient ratio
// before the contiguous partition; the missing bin is always its own leaf.
bool main_update(const Term& t, const std::vector<double>& G, const std::vector<double>& H,
                 const std::vector<double>& W, const EbmHyperparams& hp, std::vector<double>& delta) {
  const int regular = t.cols - 1;
  std::vector<int> order(static_cast<std::size_t>(regular));
  std::iota(order.begin(), order.end(), 0);
  if (t.categorical_main) {
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
      return G[static_cast<std::size_t>(x)] / (H[static_cast<std::size_t>(x)] + 1.0) <
             G[static_cast<std::size_t>(y)] / (H[static_cast<std::size_t>(y)] + 1.0);
    });
  }
  std::vector<double> g(static_cast<std::size_t>(regular)), h(g.size()), w(g.size()), d(g.size());
  for (int i = 0; i < regular; ++i) {
    const auto src = static_cast<std::size_t>(order[static_cast<std::size_t>(i)]);
    g[static_cast<std::size_t>(i)] = G[src];
    h[static_cast<std::size_t>(i)] = H[src];
    w[static_cast<std::size_t>(i)] = W[src];
  }
  bool moved = false;
  if (regular > 0) {
    moved = fit_grid_tree(1, regular, g.data(), h.data(), w.data(), hp.max_leaves, hp.min_samples_leaf,
                          hp.learning_rate, d.data());
  }
  for (int i = 0; i < regular; ++i) {
    delta[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = d[static_cast<std::size_t>(i)];
  }
  const auto miss = static_cast<std::size_t>(regular);
  delta[miss] = W[miss] > 0 ? -hp.learning_rate * G[miss] / (H[miss] + 1.0) : 0.0;
  moved |= delta[miss] != 0.0;
  return moved;
}

// Cyclic boosting of `terms` until the holdout loss stops improving for
// `patience` rounds or max_rounds is reached. Restores the best round.
int boost_terms(Bag& bag, std::vector<Term>& terms, const EbmHyperparams& hp) {
  if (terms.empty()) return 0;
  std::size_t max_cells = 0;
  for (const auto& t : terms) max_cells = std::max(max_cells, t.scores.size());
  std::vector<double> G(max_cells), H(max_cells), W(max_cells), delta(max_cells);
  std::vector<double> pending_delta(max_cells);
  const Term* pending = nullptr;

  const bool early_stop = !bag.hold_rows.empty();
  double best_loss = early_stop ? holdout_loss(bag) : 0.0;
  int best_round = 0;
  std::vector<std::vector<double>> best_scores;
  for (const auto& t : terms) best_scores.push_back(t.scores);

  const std::size_t n = bag.fit_rows.size();
  int round = 0;
  for (round = 1; round <= hp.max_rounds; ++round) {
    bool any_moved = false;
    for (auto& t : terms) {
      const std::size_t cells = t.scores.size();
      std::fill_n(G.begin(), cells, 0.0);
      std::fill_n(H.begin(), cells, 0.0);
      std::fill_n(W.begin(), cells, 0.0);
      double* logit = bag.fit_logit.data();
      const double* wts = bag.fit_w.data();
      const std::uint8_t* y = bag.fit_y.data();
      const std::uint16_t* cur = t.fit_cells.data();
      // The previous term's update is applied in the same pass that builds
      // this term's histogram.
      if (pending) {
        const std::uint16_t* prev = pending->fit_cells.data();
        const double* pd = pending_delta.data();
        for (std::size_t k = 0; k < n; ++k) {
          const double z = logit[k] + pd[prev[k]];
          logit[k] = z;
          const double p = 1.0 / (1.0 + std::exp(-z));
          const double wk = wts[k];
          const auto c = cur[k];
          G[c] += wk * (p - y[k]);
          H[c] += wk * p * (1.0 - p);
          W[c] += wk;
        }
      } else {
        for (std::size_t k = 0; k < n; ++k) {
          const double p = 1.0 / (1.0 + std::exp(-logit[k]));
          const double wk = wts[k];
          const auto c = cur[k];
          G[c] += wk * (p - y[k]);
          H[c] += wk * p * (1.0 - p);
          W[c] += wk;
        }
      }

      bool moved = false;
      if (t.pair) {
        moved = fit_grid_tree(t.rows, t.cols, G.data(), H.data(), W.data(), hp.max_leaves, hp.min_samples_leaf,
                              hp.learning_rate, delta.data());
      } else {
        moved = main_update(t, G, H, W, hp, delta);
      }
      any_moved |= moved;
      for (std::size_t c = 0; c < cells; ++c) t.scores[c] += delta[c];
      for (std::size_t k = 0; k < bag.hold_logit.size(); ++k) bag.hold_logit[k] += delta[t.hold_cells[k]];
      std::copy_n(delta.begin(), cells, pending_delta.begin());
      pending = &t;
    }

    if (early_stop) {
      const double loss = holdout_loss(bag);
      if (loss < best_loss) {
        best_loss = loss;
        best_round = round;
        for (std::size_t i = 0; i < terms.size(); ++i) best_scores[i] = terms[i].scores;
      } else if (round - best_round >= hp.early_stop_patience) {
        break;
      }
    }
    if (!any_moved) break;
  }
  if (early_stop) {
    for (std::size_t i = 0; i < terms.size(); ++i) terms[i].scores = best_scores[i];
    recompute_logits(bag);
    return best_round;
  }
  if (pending) {
    for (std::size_t k = 0; k < n; ++k) bag.fit_logit[k] += pending_delta[pending->fit_cells[k]];
  }
  return std::min(round, hp.max_rounds);
}

// One-shot four-quadrant fit of the residual gradients on a pair's block
// grid; returns the best loss reduction over all cut pairs.
double pair_strength(const Bag& bag, const std::vector<double>& g, const std::vector<double>& h,
                     const std::vector<std::uint16_t>& blocks_a, int rows,
                     const std::vector<std::uint16_t>& blocks_b, int cols, double min_leaf) {
  std::vector<double> G(static_cast<std::size_t>(rows * cols)), H(G.size()), W(G.size());
  for (std::size_t k = 0; k < bag.fit_rows.size(); ++k) {
    const std::size_t c = static_cast<std::size_t>(blocks_a[k]) * static_cast<std::size_t>(cols) + blocks_b[k];
    G[c] += g[k];
    H[c] += h[k];
    W[c] += bag.fit_w[k];
  }
  const GridSums sums(rows, cols, G.data(), H.data(), W.data());
  const auto all = sums.rect(0, rows, 0, cols);
  const double parent = leaf_gain(all);
  double best = 0.0;
  for (int i = 1; i < rows; ++i) {
    for (int j = 1; j < cols; ++j) {
      const GridSums::Sum q[4] = {sums.rect(0, i, 0, j), sums.rect(0, i, j, cols), sums.rect(i, rows, 0, j),
                                  sums.rect(i, rows, j, cols)};
      double gain = -parent;
      bool ok = true;
      for (const auto& s : q) {
        if (s.w < min_leaf) ok = false;
        gain += leaf_gain(s);
      }
      if (ok && gain > best) best = gain;
    }
  }
  return best;
}

}  // namespace

EbmModel train_ebm(const BinnedDataset& data, const EbmHyperparams& hp_in) {
  hp_in.validate();
  EbmHyperparams hp = hp_in;
  const std::size_t n = data.rows();
  const std::size_t p = data.features();
  if (p == 0) throw DataError("ebm: no features");
  if (n > std::numeric_limits<std::uint32_t>::max()) throw DataError("ebm: too many rows");
  const auto labels = data.outcome();
  const auto positives = std::count(labels.begin(), labels.end(), std::uint8_t{1});
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(n)) throw DataError("single-class outcome");

  EbmModel model;
  model.layout = data.layout();
  model.info.rows = n;
  model.info.prevalence = static_cast<double>(positives) / static_cast<double>(n);
  const std::size_t max_pairs = p * (p - 1) / 2;
  if (static_cast<std::size_t>(hp.interactions) > max_pairs) {
    model.info.warnings.push_back("interactions clamped from " + std::to_string(hp.interactions) + " to " +
                                  std::to_string(max_pairs));
    hp.interactions = static_cast<int>(max_pairs);
  }
  model.hyperparams = hp;
  model.bag_count = hp.outer_bags;

  std::vector<std::vector<std::uint16_t>> block_maps(p);
  std::vector<int> block_counts(p);
  for (std::size_t f = 0; f < p; ++f) {
    block_maps[f] = make_blocks(data.layout()[f], data.bin_counts(f), hp.interaction_blocks, block_counts[f]);
  }

  std::vector<Bag> bags(static_cast<std::size_t>(hp.outer_bags));

  // Stage 1: bootstrap, holdout split and main effects, per bag.
  parallel_for(bags.size(), [&](std::size_t bi) {
    Bag& bag = bags[bi];
    Rng rng(mix_seed(hp.seed, bi));
    std::vector<std::uint32_t> counts(n, 0);
    for (std::size_t i = 0; i < n; ++i) ++counts[rng.below(n)];
    for (std::uint32_t r = 0; r < n; ++r) {
      const bool hold = rng.uniform() < hp.holdout_fraction;
      if (counts[r] == 0) continue;
      if (hold) {
        bag.hold_rows.push_back(r);
        bag.hold_w.push_back(counts[r]);
        bag.hold_y.push_back(labels[r]);
      } else {
        bag.fit_rows.push_back(r);
        bag.fit_w.push_back(counts[r]);
        bag.fit_y.push_back(labels[r]);
      }
    }
    double wy = 0.0, wsum = 0.0;
    for (std::size_t k = 0; k < bag.fit_rows.size(); ++k) {
      wy += bag.fit_w[k] * bag.fit_y[k];
      wsum += bag.fit_w[k];
    }
    if (wy <= 0 || wy >= wsum) throw DataError("single-class outcome in a bootstrap sample");
    bag.intercept = logit(wy / wsum);
    bag.fit_logit.assign(bag.fit_rows.size(), bag.intercept);
    bag.hold_logit.assign(bag.hold_rows.size(), bag.intercept);

    for (std::size_t f = 0; f < p; ++f) {
      Term t;
      t.a = f;
      t.cols = data.layout()[f].total_bins();
      t.categorical_main = data.layout()[f].kind == ColumnKind::kCategorical;
      t.scores.assign(static_cast<std::size_t>(t.cols), 0.0);
      const auto codes = data.codes(f);
      t.fit_cells.reserve(bag.fit_rows.size());
      for (auto r : bag.fit_rows) t.fit_cells.push_back(codes[r]);
      for (auto r : bag.hold_rows) t.hold_cells.push_back(codes[r]);
      bag.mains.push_back(std::move(t));
    }
    bag.main_rounds = boost_terms(bag, bag.mains, hp);
  });

  // Stage 2: rank pairs by their residual fit summed over bags; the same
  // pairs are then boosted in every bag.
  std::vector<std::pair<std::size_t, std::size_t>> chosen;
  if (hp.interactions > 0 && p >= 2) {
    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    for (std::size_t a = 0; a < p; ++a) {
      for (std::size_t b = a + 1; b < p; ++b) candidates.emplace_back(a, b);
    }
    std::vector<double> strength(candidates.size(), 0.0);
    std::vector<std::vector<double>> per_bag(bags.size());
    parallel_for(bags.size(), [&](std::size_t bi) {
      const Bag& bag = bags[bi];
      std::vector<double> g(bag.fit_rows.size()), h(g.size());
      for (std::size_t k = 0; k < g.size(); ++k) {
        const double pr = sigmoid(bag.fit_logit[k]);
        g[k] = bag.fit_w[k] * (pr - bag.fit_y[k]);
        h[k] = bag.fit_w[k] * pr * (1.0 - pr);
      }
      std::vector<std::vector<std::uint16_t>> blocks(p);
      for (std::size_t f = 0; f < p; ++f) {
        const auto codes = data.codes(f);
        blocks[f].reserve(bag.fit_rows.size());
        for (auto r : bag.fit_rows) blocks[f].push_back(block_maps[f][codes[r]]);
      }
      auto& out = per_bag[bi];
      out.resize(candidates.size());
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        const auto [a, b] = candidates[c];
        out[c] = pair_strength(bag, g, h, blocks[a], block_counts[a], blocks[b], block_counts[b],
                               hp.min_samples_leaf);
      }
    });
    for (const auto& v : per_bag) {
      for (std::size_t c = 0; c < v.size(); ++c) strength[c] += v[c];
    }
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return strength[x] > strength[y]; });
    order.resize(static_cast<std::size_t>(hp.interactions));
    std::sort(order.begin(), order.end());
    for (auto c : order) chosen.push_back(candidates[c]);
  }

  // Stage 3: boost the chosen pairs on top of the mains.
  if (!chosen.empty()) {
    parallel_for(bags.size(), [&](std::size_t bi) {
      Bag& bag = bags[bi];
      for (const auto& [a, b] : chosen) {
        Term t;
        t.pair = true;
        t.a = a;
        t.b = b;
        t.rows = block_counts[a];
        t.cols = block_counts[b];
        t.scores.assign(static_cast<std::size_t>(t.rows * t.cols), 0.0);
        const auto ca = data.codes(a);
        const auto cb = data.codes(b);
        auto cell = [&](std::uint32_t r) {
          return static_cast<std::uint16_t>(block_maps[a][ca[r]] * t.cols + block_maps[b][cb[r]]);
        };
        for (auto r : bag.fit_rows) t.fit_cells.push_back(cell(r));
        for (auto r : bag.hold_rows) t.hold_cells.push_back(cell(r));
        bag.pairs.push_back(std::move(t));
      }
      bag.pair_rounds = boost_terms(bag, bag.pairs, hp);
    });
  }

  // Average the bags. All bags share bins and blocks, so this is cellwise.
  const double inv_bags = 1.0 / static_cast<double>(bags.size());
  model.mains.resize(p);
  for (std::size_t f = 0; f < p; ++f) {
    auto& shape = model.mains[f];
    shape.feature = data.layout()[f].name;
    shape.scores.assign(static_cast<std::size_t>(data.layout()[f].total_bins()), 0.0);
    const auto counts = data.bin_counts(f);
    shape.bin_weights.assign(counts.begin(), counts.end());
  }
  for (const auto& [a, b] : chosen) {
    InteractionTable table;
    table.first = a;
    table.second = b;
    table.first_blocks = block_maps[a];
    table.second_blocks = block_maps[b];
    table.block_rows = static_cast<std::size_t>(block_counts[a]);
    table.block_cols = static_cast<std::size_t>(block_counts[b]);
    table.block_scores.assign(table.block_rows * table.block_cols, 0.0);
    model.interactions.push_back(std::move(table));
  }
  for (const auto& bag : bags) {
    model.intercept += bag.intercept * inv_bags;
    for (std::size_t f = 0; f < p; ++f) {
      for (std::size_t c = 0; c < bag.mains[f].scores.size(); ++c) {
        model.mains[f].scores[c] += bag.mains[f].scores[c] * inv_bags;
      }
    }
    for (std::size_t i = 0; i < bag.pairs.size(); ++i) {
      for (std::size_t c = 0; c < bag.pairs[i].scores.size(); ++c) {
        model.interactions[i].block_scores[c] += bag.pairs[i].scores[c] * inv_bags;
      }
    }
    model.info.main_rounds.push_back(bag.main_rounds);
    model.info.interaction_rounds.push_back(bag.pair_rounds);
  }

  // Center every term under the training distribution.
  for (auto& shape : model.mains) {
    const double mean = shape.weighted_mean();
    for (auto& s : shape.scores) s -= mean;
    model.intercept += mean;
  }
  for (auto& table : model.interactions) {
    std::vector<double> joint(table.block_scores.size(), 0.0);
    const auto ca = data.codes(table.first);
    const auto cb = data.codes(table.second);
    for (std::size_t r = 0; r < n; ++r) {
      joint[table.first_blocks[ca[r]] * table.block_cols + table.second_blocks[cb[r]]] += 1.0;
    }
    double mean = 0.0;
    for (std::size_t c = 0; c < joint.size(); ++c) mean += joint[c] * table.block_scores[c];
    mean /= static_cast<double>(n);
    for (auto& s : table.block_scores) s -= mean;
    model.intercept += mean;
  }

  const auto ranked = feature_importance(model, data);
  model.importances.assign(model.term_count(), 0.0);
  for (std::size_t t = 0; t < model.term_count(); ++t) {
    const auto name = model.term_name(t);
    for (const auto& r : ranked) {
      if (r.term == name) model.importances[t] = r.importance;
    }
  }
  return model;
}

namespace {

std::vector<int> bins_of(const EbmModel& model, const Record& row, PredictDiagnostics* diag) {
  if (row.values.size() != model.layout.size()) throw ConfigError("record does not match the model's features");
  std::vector<int> bins(model.layout.size());
  for (std::size_t f = 0; f < model.layout.size(); ++f) {
    bool unknown = false;
    bins[f] = model.layout[f].bin_of(row.values[f], &unknown);
    if (unknown && diag) ++diag->unknown_categories;
  }
  return bins;
}

double sum_terms(const EbmModel& model, std::span<const int> bins) {
  double z = model.intercept;
  for (std::size_t f = 0; f < model.mains.size(); ++f) z += model.mains[f].scores[static_cast<std::size_t>(bins[f])];
  for (const auto& t : model.interactions) z += t.at(bins[t.first], bins[t.second]);
  return z;
}

}  // namespace

std::vector<double> term_contributions(const EbmModel& model, std::span<const int> bins) {
  std::vector<double> out;
  out.reserve(model.term_count());
  for (std::size_t f = 0; f < model.mains.size(); ++f) out.push_back(model.mains[f].scores[static_cast<std::size_t>(bins[f])]);
  for (const auto& t : model.interactions) out.push_back(t.at(bins[t.first], bins[t.second]));
  return out;
}

double predict_logit(const EbmModel& model, const Record& row, PredictDiagnostics* diag) {
  const auto bins = bins_of(model, row, diag);
  return sum_terms(model, bins);
}

double predict_proba(const EbmModel& model, const Record& row, PredictDiagnostics* diag) {
  return sigmoid(predict_logit(model, row, diag));
}

std::vector<double> predict_logit(const EbmModel& model, const BinnedDataset& data) {
  if (!(data.layout() == model.layout)) throw ConfigError("dataset is binned with a different layout");
  const std::size_t n = data.rows();
  std::vector<double> z(n, model.intercept);
  for (std::size_t f = 0; f < model.mains.size(); ++f) {
    const auto codes = data.codes(f);
    const auto& s = model.mains[f].scores;
    for (std::size_t r = 0; r < n; ++r) z[r] += s[codes[r]];
  }
  for (const auto& t : model.interactions) {
    const auto ca = data.codes(t.first);
    const auto cb = data.codes(t.second);
    for (std::size_t r = 0; r < n; ++r) z[r] += t.at(ca[r], cb[r]);
  }
  return z;
}

std::vector<double> predict_logit(const EbmModel& model, const Dataset& data, PredictDiagnostics* diag) {
  const BinnedDataset binned = apply_bins(data, model.layout);
  if (diag) diag->unknown_categories += binned.unknown_categories();
  return predict_logit(model, binned);
}

std::vector<double> predict_proba(const EbmModel& model, const Dataset& data, PredictDiagnostics* diag) {
  auto z = predict_logit(model, data, diag);
  for (auto& v : z) v = sigmoid(v);
  return z;
}

std::vector<TermImportance> feature_importance(const EbmModel& model, const BinnedDataset& data) {
  if (data.rows() == 0) throw DataError("feature_importance: empty data");
  if (!(data.layout() == model.layout)) throw ConfigError("dataset is binned with a different layout");
  const double n = static_cast<double>(data.rows());
  std::vector<TermImportance> out;
  for (std::size_t f = 0; f < model.mains.size(); ++f) {
    const auto counts = data.bin_counts(f);
    double total = 0.0;
    for (std::size_t b = 0; b < counts.size(); ++b) total += static_cast<double>(counts[b]) * std::abs(model.mains[f].scores[b]);
    out.push_back({model.term_name(f), total / n});
  }
  for (std::size_t i = 0; i < model.interactions.size(); ++i) {
    const auto& t = model.interactions[i];
    const auto ca = data.codes(t.first);
    const auto cb = data.codes(t.second);
    double total = 0.0;
    for (std::size_t r = 0; r < data.rows(); ++r) total += std::abs(t.at(ca[r], cb[r]));
    out.push_back({model.term_name(model.mains.size() + i), total / n});
  }
  std::stable_sort(out.begin(), out.end(), [](const TermImportance& a, const TermImportance& b) {
    if (a.importance != b.importance) return a.importance > b.importance;
    return a.term < b.term;
  });
  return out;
}

Explanation local_explanation(const EbmModel& model, const Record& row, PredictDiagnostics* diag) {
  const auto bins = bins_of(model, row, diag);
  const auto contrib = term_contributions(model, bins);
  Explanation e;
  e.intercept = model.intercept;
  e.logit = sum_terms(model, bins);
  for (std::size_t t = 0; t < contrib.size(); ++t) {
    const double c = contrib[t];
    e.terms.push_back({model.term_name(t), c, c > 0 ? 1 : (c < 0 ? -1 : 0)});
  }
  std::stable_sort(e.terms.begin(), e.terms.end(), [](const TermContribution& a, const TermContribution& b) {
    const double x = std::abs(a.contribution), y = std::abs(b.contribution);
    if (x != y) return x > y;
    return a.term < b.term;
  });
  return e;
}

TruncatedExplanation truncate(const Explanation& explanation, std::size_t top) {
  TruncatedExplanation out;
  out.intercept = explanation.intercept;
  out.logit = explanation.logit;
  const std::size_t keep = std::min(top, explanation.terms.size());
  out.terms.assign(explanation.terms.begin(), explanation.terms.begin() + static_cast<std::ptrdiff_t>(keep));
  if (keep < explanation.terms.size()) {
    double rest = 0.0;
    for (std::size_t i = keep; i < explanation.terms.size(); ++i) rest += explanation.terms[i].contribution;
    out.remainder = TermContribution{
        "remaining " + std::to_string(explanation.terms.size() - keep) + " terms", rest,
        rest > 0 ? 1 : (rest < 0 ? -1 : 0)};
  }
  return out;
}

}  // namespace interprisk
