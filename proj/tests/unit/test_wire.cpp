#include <gtest/gtest.h>

#include <json.hpp>

#include "rftkit/error.hpp"
#include "rftkit/wire.hpp"

using namespace rftkit;
using nlohmann::json;

TEST(Wire, RewardScoreRoundTrip) {
  for (const RewardScore s : {RewardScore{1.0, 0.5, 1.0}, RewardScore{0.0, 0.0, 0.0}, RewardScore{0.5, 0.5, 1.0}}) {
    EXPECT_EQ(reward_score_from_json(to_json(s)), s);
  }
  EXPECT_EQ(to_json(RewardScore{0.5, 0.5, 1.0}), R"({"accuracy":0.5,"format":0.5,"total":1.0})");
}

TEST(Wire, RewardScoreRejects) {
  try {
    reward_score_from_json(R"({"accuracy":1,"format":"x","total":1})", 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SchemaViolation);
    EXPECT_EQ(e.line(), 4u);
  }
  EXPECT_THROW(reward_score_from_json("[1,2,3]"), Error);
  EXPECT_THROW(reward_score_from_json("{"), Error);
}

TEST(Wire, Verdicts) {
  const auto f = json::parse(to_json(verify_format("<answer>1</answer>", "think")));
  EXPECT_FALSE(f["passed"].get<bool>());
  EXPECT_EQ(f["violations"], json::array({"MissingBehaviorTag"}));
  const auto e = json::parse(to_json(check_equivalence("0.5", "\\frac{1}{2}")));
  EXPECT_TRUE(e["equivalent"].get<bool>());
  EXPECT_EQ(e["method"], "ExactRational");
}

TEST(Wire, ClassificationRoundTrip) {
  ClassificationResult r{3, ElicitedBehavior::Planning, 1, "PRESENT: yes"};
  const auto back = classification_from_json(to_json(r));
  EXPECT_EQ(back.response_id, 3u);
  EXPECT_EQ(back.behavior, Behavior(ElicitedBehavior::Planning));
  EXPECT_EQ(back.value, 1u);
  EXPECT_EQ(back.classifier_raw, "PRESENT: yes");

  r.value.reset();
  EXPECT_TRUE(json::parse(to_json(r))["value"].is_null());
  EXPECT_FALSE(classification_from_json(to_json(r)).value.has_value());

  EXPECT_THROW(classification_from_json(R"({"response_id":-1,"behavior":"planning","value":1})"), Error);
  EXPECT_THROW(classification_from_json(R"({"response_id":1,"behavior":"dancing","value":1})"), Error);
  EXPECT_THROW(classification_from_json(R"({"response_id":1,"behavior":"planning"})"), Error);
}

TEST(Wire, BehaviorReport) {
  std::vector<ClassificationResult> rs = {{0, CognitiveBehavior::Verification, 2, ""},
                                          {1, CognitiveBehavior::Verification, 1, ""},
                                          {2, CognitiveBehavior::Verification, std::nullopt, ""}};
  const auto j = json::parse(to_json(aggregate(rs, 3)));
  EXPECT_EQ(j["n_responses"], 3);
  EXPECT_EQ(j["n_parse_failures"], 1);
  EXPECT_EQ(j["behaviors"]["verification"]["total"], 3);
  EXPECT_EQ(j["behaviors"]["verification"]["ratio_4dp"], "1.0000");
  EXPECT_EQ(j["behaviors"]["verification"]["kind"], "cognitive");
}

TEST(Wire, EvalResultNulls) {
  EvalResult r;
  r.benchmark = "aime";
  r.n_items = 3;
  r.n_correct = 2;
  r.accuracy_pct = 200.0 / 3;
  r.length_method = "unavailable";
  const auto j = json::parse(to_json(r));
  EXPECT_EQ(j["accuracy_pct"], "66.67");
  EXPECT_TRUE(j["approach"].is_null());
  EXPECT_TRUE(j["avg_response_length"].is_null());
  EXPECT_TRUE(j["seed"].is_null());
}

TEST(Wire, GroupStats) {
  const std::vector<double> rewards = {1.0, 0.0};
  const auto j = json::parse(to_json(group_stats(rewards, 2).front()));
  EXPECT_DOUBLE_EQ(j["mean"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(j["std"].get<double>(), 0.5);
  EXPECT_EQ(j["advantages"].size(), 2u);
}
