#pragma once

#include <string>
#include <vector>

#include "interprisk/ebm.hpp"

namespace interprisk {

enum class ImportanceMode {
  kRecompute,  // rank by the current model at every step
  kInitial,    // rank once by the full model
};

struct SparsityStep {
  std::size_t n_mains = 0;
  std::size_t n_interactions = 0;
  std::vector<std::string> features;  // retained mains, by descending importance
  double validation_auc = 0.0;
  EbmModel model;
};

struct SparsitySweep {
  SparsityStep full;  // starting model, trained with hp.interactions
  std::vector<SparsityStep> steps;
  std::string error;  // set when a retrain failed; steps holds what finished
};

// Interaction count used for a model with n mains.
inline std::size_t sparse_interactions(std::size_t n_mains) { return n_mains / 2; }

// Backward selection. Main counts step down to the next lower multiple of
// `step` (57 -> 55 -> 50 ...), never below `floor`; each retrain uses
// floor(0.5 * n) interactions.
SparsitySweep backward_select(const BinnedDataset& train, const BinnedDataset& validate, const EbmHyperparams& hp,
                              std::size_t step, std::size_t floor,
                              ImportanceMode mode = ImportanceMode::kRecompute);

}  // namespace interprisk
