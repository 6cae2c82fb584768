#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "interprisk/ebm.hpp"
#include "interprisk/linear.hpp"
#include "interprisk/trees.hpp"

namespace interprisk {

using AnyModel = std::variant<EbmModel, LinearModel, TreeEnsemble>;

inline constexpr int kModelFormatVersion = 1;

// "ebm", "linear", "gbdt" or "forest".
std::string model_kind(const AnyModel& model);

// Hash of the inputs a model expects: bin layout or expanded linear design.
std::string model_schema_hash(const AnyModel& model);

// Versioned envelope: {"format", "version", "kind", "schema_hash", "model"}.
// Doubles are written with 17 significant digits, so a load reproduces the
// model exactly.
std::string model_to_json(const AnyModel& model);
AnyModel model_from_json(std::string_view text);
void save_model(const AnyModel& model, const std::filesystem::path& path);
AnyModel load_model(const std::filesystem::path& path);

nlohmann::json layout_to_json(const BinLayout& layout);
BinLayout layout_from_json(const nlohmann::json& j);

nlohmann::json ebm_params_to_json(const EbmHyperparams& hp);
EbmHyperparams ebm_params_from_json(const nlohmann::json& j, EbmHyperparams base = {});
nlohmann::json gbdt_params_to_json(const GbdtParams& p);
GbdtParams gbdt_params_from_json(const nlohmann::json& j, GbdtParams base = {});
nlohmann::json forest_params_to_json(const ForestParams& p);
ForestParams forest_params_from_json(const nlohmann::json& j, ForestParams base = {});

// Scores for the rows of `data` on the probability scale.
std::vector<double> predict_scores(const AnyModel& model, const Dataset& data);

}  // namespace interprisk
