#include "interprisk/sparsity.hpp"

#include <algorithm>

#include "interprisk/metrics.hpp"

namespace interprisk {

namespace {

// Mains of `model` by descending importance, ties by name.
std::vector<std::string> ranked_mains(const EbmModel& model) {
  std::vector<std::size_t> idx(model.mains.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (model.importances[a] != model.importances[b]) return model.importances[a] > model.importances[b];
    return model.mains[a].feature < model.mains[b].feature;
  });
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(model.mains[i].feature);
  return out;
}

SparsityStep fit_step(const BinnedDataset& train, const BinnedDataset& validate, EbmHyperparams hp,
                      const std::vector<std::string>& features, std::size_t interactions) {
  const auto tr = train.select(features);
  const auto va = validate.select(features);
  hp.interactions = static_cast<int>(interactions);
  SparsityStep s;
  s.model = train_ebm(tr, hp);
  s.n_mains = features.size();
  s.n_interactions = s.model.interactions.size();
  s.features = ranked_mains(s.model);
  s.validation_auc = auc(predict_logit(s.model, va), va.outcome());
  return s;
}

}  // namespace

SparsitySweep backward_select(const BinnedDataset& train, const BinnedDataset& validate, const EbmHyperparams& hp,
                              std::size_t step, std::size_t floor, ImportanceMode mode) {
  if (step < 1) throw ConfigError("backward selection: step must be >= 1");
  if (floor < 1) throw ConfigError("backward selection: floor must be >= 1");
  const std::size_t p = train.features();
  if (p == 0) throw DataError("backward selection: no features");

  SparsitySweep sweep;
  std::vector<std::string> all;
  for (const auto& f : train.layout()) all.push_back(f.name);
  sweep.full = fit_step(train, validate, hp, all, static_cast<std::size_t>(hp.interactions));
  const auto initial = sweep.full.features;

  std::vector<std::string> current = initial;
  const SparsityStep* previous = &sweep.full;
  while (current.size() > floor) {
    const std::size_t n = current.size();
    std::size_t target = (n - 1) / step * step;
    target = std::max(target, floor);
    std::vector<std::string> keep;
    if (mode == ImportanceMode::kRecompute) {
      keep.assign(previous->features.begin(), previous->features.begin() + static_cast<std::ptrdiff_t>(target));
    } else {
      for (const auto& f : initial) {
        if (keep.size() == target) break;
        if (std::find(current.begin(), current.end(), f) != current.end()) keep.push_back(f);
      }
    }
    // Train in layout order so the model does not depend on the ranking.
    std::vector<std::string> ordered;
    for (const auto& f : all) {
      if (std::find(keep.begin(), keep.end(), f) != keep.end()) ordered.push_back(f);
    }
    try {
      sweep.steps.push_back(fit_step(train, validate, hp, ordered, sparse_interactions(ordered.size())));
    } catch (const std::exception& e) {
      sweep.error = "retrain with " + std::to_string(ordered.size()) + " mains failed: " + e.what();
      break;
    }
    previous = &sweep.steps.back();
    current = ordered;
  }
  return sweep;
}

}  // namespace interprisk
