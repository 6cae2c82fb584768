#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "interprisk/binning.hpp"

namespace interprisk {

// Defaults follow the published EBM configuration (interactions 30, nine
// outer bags, learning rate 0.0014, min_samples_leaf 2, max_leaves 3).
struct EbmHyperparams {
  int interactions = 30;
  int outer_bags = 9;
  double learning_rate = 0.0014;
  int min_samples_leaf = 2;
  int max_leaves = 3;
  int max_rounds = 5000;
  int early_stop_patience = 50;
  // Fraction of each bag's distinct rows held out for early stopping.
  double holdout_fraction = 0.15;
  // Interaction grids are boosted over at most this many cut blocks per
  // axis (plus the missing bin); the stored table still spans every bin.
  int interaction_blocks = 32;
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const EbmHyperparams&) const = default;
};

// Piecewise-constant main effect over one feature's bins, in logit units.
struct ShapeFunction {
  std::string feature;
  std::vector<double> scores;  // one per bin, the missing bin last
  std::vector<double> bin_weights;  // training row count per bin

  double weighted_mean() const;
  bool operator==(const ShapeFunction&) const = default;
};

// Pairwise term. Bins of each feature map onto blocks; the score of a bin
// pair is the score of its block pair.
struct InteractionTable {
  std::size_t first = 0;  // feature indices into EbmModel::layout
  std::size_t second = 0;
  std::vector<std::uint16_t> first_blocks;   // bin -> block, size total_bins(first)
  std::vector<std::uint16_t> second_blocks;  // bin -> block, size total_bins(second)
  std::size_t block_rows = 0;
  std::size_t block_cols = 0;
  std::vector<double> block_scores;  // block_rows x block_cols, row-major

  double at(int first_bin, int second_bin) const {
    return block_scores[first_blocks[static_cast<std::size_t>(first_bin)] * block_cols +
                        second_blocks[static_cast<std::size_t>(second_bin)]];
  }
  bool operator==(const InteractionTable&) const = default;
};

struct EbmTrainingInfo {
  std::size_t rows = 0;
  double prevalence = 0.0;
  std::vector<int> main_rounds;         // per bag
  std::vector<int> interaction_rounds;  // per bag
  Warnings warnings;
  bool operator==(const EbmTrainingInfo&) const = default;
};

struct EbmModel {
  BinLayout layout;
  double intercept = 0.0;
  std::vector<ShapeFunction> mains;  // aligned with layout
  std::vector<InteractionTable> interactions;
  // Mean |contribution| on the training rows: mains first, then interactions.
  std::vector<double> importances;
  EbmHyperparams hyperparams;
  int bag_count = 0;
  EbmTrainingInfo info;

  std::size_t term_count() const { return mains.size() + interactions.size(); }
  std::string term_name(std::size_t term) const;
  bool operator==(const EbmModel&) const = default;
};

EbmModel train_ebm(const BinnedDataset& data, const EbmHyperparams& hp);

struct PredictDiagnostics {
  std::size_t unknown_categories = 0;
};

// Exact sum of the intercept and the looked-up term scores. Categories the
// model has never seen use the missing bin and are counted in `diag`.
double predict_logit(const EbmModel& model, const Record& row, PredictDiagnostics* diag = nullptr);
double predict_proba(const EbmModel& model, const Record& row, PredictDiagnostics* diag = nullptr);

// Batch prediction for rows encoded with the model's own layout.
std::vector<double> predict_logit(const EbmModel& model, const BinnedDataset& data);
// Batch prediction from raw cells; columns are matched by name.
std::vector<double> predict_logit(const EbmModel& model, const Dataset& data,
                                  PredictDiagnostics* diag = nullptr);
std::vector<double> predict_proba(const EbmModel& model, const Dataset& data,
                                  PredictDiagnostics* diag = nullptr);

// Per-term contribution of one encoded row.
std::vector<double> term_contributions(const EbmModel& model, std::span<const int> bins);

struct TermImportance {
  std::string term;
  double importance = 0.0;
};

// Mean absolute contribution of every term on `data` (encoded with the
// model's layout), descending, ties by term name.
std::vector<TermImportance> feature_importance(const EbmModel& model, const BinnedDataset& data);

struct TermContribution {
  std::string term;
  double contribution = 0.0;
  int sign = 0;
};

struct Explanation {
  double intercept = 0.0;
  double logit = 0.0;
  // Every term, by descending |contribution|, ties by name.
  std::vector<TermContribution> terms;
};

Explanation local_explanation(const EbmModel& model, const Record& row, PredictDiagnostics* diag = nullptr);

// Display form: the first `top` terms plus one bucket summing the rest.
struct TruncatedExplanation {
  double intercept = 0.0;
  double logit = 0.0;
  std::vector<TermContribution> terms;
  std::optional<TermContribution> remainder;
};

inline constexpr std::size_t kDefaultExplanationTerms = 15;

TruncatedExplanation truncate(const Explanation& explanation, std::size_t top = kDefaultExplanationTerms);

}  // namespace interprisk
