#include <gtest/gtest.h>

#include <filesystem>

#include "helpers.hpp"
#include "interprisk/model_io.hpp"

using namespace interprisk;

namespace {

Dataset data() { return synthesize(fixtures::small_config(1500, 1)).data; }

}  // namespace

TEST(ModelIo, EbmRoundTripIsExact) {
  const auto d = data();
  EbmHyperparams hp;
  hp.outer_bags = 1;
  hp.learning_rate = 0.05;
  hp.max_rounds = 100;
  hp.interactions = 1;
  const AnyModel m = train_ebm(bin_features(d, 32), hp);
  const auto text = model_to_json(m);
  const auto back = model_from_json(text);
  EXPECT_EQ(std::get<EbmModel>(back), std::get<EbmModel>(m));
  EXPECT_EQ(model_to_json(back), text);
  EXPECT_EQ(predict_scores(back, d), predict_scores(m, d));
  EXPECT_EQ(model_kind(m), "ebm");
}

TEST(ModelIo, LinearAndTreesRoundTrip) {
  const auto d = data();
  const AnyModel lin = train_logistic_l1(d, 0.01);
  EXPECT_EQ(std::get<LinearModel>(model_from_json(model_to_json(lin))), std::get<LinearModel>(lin));
  GbdtParams gp;
  gp.n_estimators = 5;
  const AnyModel gb = train_gbdt(bin_features(d, 32), gp);
  EXPECT_EQ(std::get<TreeEnsemble>(model_from_json(model_to_json(gb))), std::get<TreeEnsemble>(gb));
  ForestParams fp;
  fp.n_estimators = 3;
  const AnyModel rf = train_random_forest(bin_features(d, 32), fp);
  EXPECT_EQ(model_kind(rf), "forest");
  const auto p = std::filesystem::temp_directory_path() / "interprisk_model_io.json";
  save_model(rf, p);
  EXPECT_EQ(std::get<TreeEnsemble>(load_model(p)), std::get<TreeEnsemble>(rf));
  std::filesystem::remove(p);
}

TEST(ModelIo, RejectsForeignOrFutureFiles) {
  EXPECT_THROW(model_from_json("{}"), ConfigError);
  EXPECT_THROW(model_from_json("not json"), ConfigError);
  auto j = nlohmann::json::parse(model_to_json(AnyModel(train_logistic_l1(data(), 0.01))));
  j["version"] = 99;
  EXPECT_THROW(model_from_json(j.dump()), ConfigError);
}

TEST(ModelIo, ParamsRejectUnknownKeys) {
  EXPECT_THROW(ebm_params_from_json(nlohmann::json{{"bags", 3}}), ConfigError);
  EXPECT_THROW(gbdt_params_from_json(nlohmann::json{{"max_depth", 0}}), ConfigError);
  EXPECT_EQ(forest_params_from_json(nlohmann::json{{"max_depth", 3}}).max_depth, 3);
  const GbdtParams g;
  EXPECT_EQ(gbdt_params_from_json(gbdt_params_to_json(g)), g);
}
