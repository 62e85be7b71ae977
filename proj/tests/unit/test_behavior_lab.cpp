#include <gtest/gtest.h>

#include "rftkit/behavior_lab.hpp"
#include "rftkit/error.hpp"

using namespace rftkit;

TEST(Behaviors, NamesRoundTrip) {
  const auto all = all_behaviors();
  EXPECT_EQ(all.size(), 9u);
  for (const auto& b : all) EXPECT_EQ(parse_behavior(to_string(b)), b);
  EXPECT_FALSE(parse_behavior("thinking").has_value());
  EXPECT_EQ(elicited_behavior_for(PpeApproach::Think), ElicitedBehavior::Reasoning);
  EXPECT_EQ(elicited_behavior_for(PpeApproach::Examples), ElicitedBehavior::NullExampleUtilization);
  EXPECT_FALSE(elicited_behavior_for(PpeApproach::NoPriorPrompt).has_value());
}

TEST(ClassifierPrompt, CognitiveAsksForCount) {
  const std::string response = "...I double-check: 3x4=12, ok...";
  const auto p = build_classifier_prompt(CognitiveBehavior::Verification, response);
  EXPECT_NE(p.find(response), std::string::npos);
  EXPECT_NE(p.find("COUNT:"), std::string::npos);
}

TEST(ClassifierPrompt, ElicitedAsksYesNo) {
  const auto p = build_classifier_prompt(ElicitedBehavior::Planning, "First I plan, then I solve.");
  EXPECT_NE(p.find("PRESENT: yes"), std::string::npos);
}

TEST(ClassifierPrompt, EmptyResponseRejected) {
  try {
    build_classifier_prompt(CognitiveBehavior::Backtracking, "");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyResponse);
  }
}

TEST(ClassifierReply, Parsing) {
  const Behavior count = CognitiveBehavior::Verification;
  const Behavior present = ElicitedBehavior::Planning;
  EXPECT_EQ(parse_classifier_reply(count, "It verifies twice... COUNT: 3"), 3u);
  EXPECT_EQ(parse_classifier_reply(count, "discount: 3"), std::nullopt);
  EXPECT_EQ(parse_classifier_reply(count, "reasoning\nCOUNT: 3"), 3u);
  EXPECT_EQ(parse_classifier_reply(count, "**COUNT: 12**"), 12u);
  EXPECT_EQ(parse_classifier_reply(count, "count: 1\nCOUNT: 4\n"), 4u);
  EXPECT_EQ(parse_classifier_reply(present, "PRESENT: yes"), 1u);
  EXPECT_EQ(parse_classifier_reply(present, "present: No"), 0u);
  EXPECT_EQ(parse_classifier_reply(present, "maybe?"), std::nullopt);
  EXPECT_EQ(parse_classifier_reply(count, "PRESENT: yes"), std::nullopt);
  EXPECT_EQ(parse_classifier_reply(count, "COUNT: -1"), std::nullopt);
}

namespace {

ClassificationResult result(std::size_t id, Behavior b, std::optional<std::uint64_t> v) {
  ClassificationResult r;
  r.response_id = id;
  r.behavior = b;
  r.value = v;
  return r;
}

}  // namespace

TEST(Aggregate, BaseRowRatios) {
  // counts spread over 811 responses the way a classifier would report them
  const std::size_t n = 811;
  std::vector<ClassificationResult> results;
  const std::pair<CognitiveBehavior, std::uint64_t> counts[] = {{CognitiveBehavior::Backtracking, 30},
                                                                {CognitiveBehavior::BackwardChaining, 1707},
                                                                {CognitiveBehavior::SubgoalSetting, 9},
                                                                {CognitiveBehavior::Verification, 195}};
  for (auto [b, total] : counts) {
    for (std::size_t id = 0; id < n; ++id) {
      const std::uint64_t v = total / n + (id < total % n ? 1 : 0);
      results.push_back(result(id, b, v));
    }
  }
  for (std::size_t id = 0; id < n; ++id) results.push_back(result(id, ElicitedBehavior::Reasoning, id < 711 ? 1 : 0));

  const auto report = aggregate(results, n);
  EXPECT_EQ(format_fixed(report.ratio(CognitiveBehavior::Backtracking), 4), "0.0370");
  EXPECT_EQ(format_fixed(report.ratio(CognitiveBehavior::BackwardChaining), 4), "2.1048");
  EXPECT_EQ(format_fixed(report.ratio(CognitiveBehavior::SubgoalSetting), 4), "0.0111");
  EXPECT_EQ(format_fixed(report.ratio(CognitiveBehavior::Verification), 4), "0.2404");
  EXPECT_EQ(format_fixed(report.ratio(ElicitedBehavior::Reasoning), 4), "0.8767");
  EXPECT_EQ(report.total(CognitiveBehavior::BackwardChaining), 1707u);
  EXPECT_EQ(report.ratio(CognitiveBehavior::Verification), BigRational(195, 811));
}

TEST(Aggregate, EmptyResultsAllZero) {
  const auto report = aggregate({}, 5);
  for (const auto& b : all_behaviors()) EXPECT_EQ(report.total(b), 0u);
  EXPECT_EQ(report.parse_failure_rate(), 0.0);
}

TEST(Aggregate, ParseFailuresCountedNotSummed) {
  std::vector<ClassificationResult> results = {result(0, CognitiveBehavior::Verification, 2),
                                               result(1, CognitiveBehavior::Verification, std::nullopt)};
  const auto report = aggregate(results, 2);
  EXPECT_EQ(report.total(CognitiveBehavior::Verification), 2u);
  EXPECT_EQ(report.n_parse_failures, 1u);
  EXPECT_DOUBLE_EQ(report.parse_failure_rate(), 0.5);
}

TEST(Aggregate, Errors) {
  EXPECT_THROW(aggregate({}, 0), Error);
  std::vector<ClassificationResult> out_of_range = {result(3, CognitiveBehavior::Verification, 1)};
  EXPECT_THROW(aggregate(out_of_range, 3), Error);
  std::vector<ClassificationResult> dup = {result(0, ElicitedBehavior::Planning, 1),
                                           result(0, ElicitedBehavior::Planning, 0)};
  try {
    aggregate(dup, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateResult);
  }
  std::vector<ClassificationResult> not_binary = {result(0, ElicitedBehavior::Planning, 2)};
  EXPECT_THROW(aggregate(not_binary, 1), Error);
}

TEST(Aggregate, ElicitedRatioBounded) {
  std::vector<ClassificationResult> results;
  for (std::size_t id = 0; id < 10; ++id) results.push_back(result(id, ElicitedBehavior::KnowledgeRecall, 1));
  const auto report = aggregate(results, 10);
  EXPECT_EQ(report.ratio(ElicitedBehavior::KnowledgeRecall), BigRational(1));
}
