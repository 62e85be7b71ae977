#include <gtest/gtest.h>

#include <fstream>

#include "rftkit/error.hpp"
#include "rftkit/prompt_registry.hpp"

using namespace rftkit;

namespace {

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + needle.size())) ++n;
  return n;
}

}  // namespace

TEST(PromptRegistry, SixApproachesFiveTags) {
  std::set<std::string> tags;
  for (auto a : kAllApproaches) {
    const auto& t = get_template(a);
    EXPECT_EQ(t.approach, a);
    if (a == PpeApproach::NoPriorPrompt) {
      EXPECT_FALSE(t.tag.has_value());
      EXPECT_TRUE(t.instruction.empty());
    } else {
      ASSERT_TRUE(t.tag.has_value());
      EXPECT_EQ(*t.tag, to_string(a));
      EXPECT_TRUE(tags.insert(*t.tag).second);
    }
  }
  EXPECT_EQ(tags.size(), 5u);
}

TEST(PromptRegistry, ThinkTemplateMentionsBothTags) {
  const auto& t = get_template(PpeApproach::Think);
  EXPECT_EQ(t.tag, "think");
  for (const char* lit : {"<think>", "</think>", "<answer>", "</answer>"}) {
    EXPECT_NE(t.instruction.find(lit), std::string::npos) << lit;
  }
  EXPECT_EQ(get_template(PpeApproach::Code).tag, "code");
}

TEST(PromptRegistry, ExpectedTag) {
  EXPECT_EQ(expected_tag(PpeApproach::Knowledge), "knowledge");
  EXPECT_EQ(expected_tag(PpeApproach::Examples), "examples");
  EXPECT_FALSE(expected_tag(PpeApproach::NoPriorPrompt).has_value());
}

TEST(PromptRegistry, WireNamesRoundTrip) {
  for (auto a : kAllApproaches) EXPECT_EQ(parse_approach(to_string(a)), a);
  EXPECT_EQ(to_string(PpeApproach::NoPriorPrompt), "none");
  EXPECT_FALSE(parse_approach("Think").has_value());
  EXPECT_FALSE(parse_approach("").has_value());
}

TEST(PromptRegistry, TagNameRule) {
  EXPECT_TRUE(is_valid_tag_name("think"));
  EXPECT_TRUE(is_valid_tag_name("step_2"));
  EXPECT_FALSE(is_valid_tag_name(""));
  EXPECT_FALSE(is_valid_tag_name("Think"));
  EXPECT_FALSE(is_valid_tag_name("a b"));
  EXPECT_FALSE(is_valid_tag_name("a>"));
}

TEST(PromptRegistry, RenderContainsInstructionAndQuestionOnce) {
  const auto& t = get_template(PpeApproach::Think);
  const std::string q = "What is 2+2?";
  const std::string p = render_prompt(t, q);
  EXPECT_EQ(count_of(p, q), 1u);
  EXPECT_EQ(count_of(p, t.instruction), 1u);
  EXPECT_EQ(p.rfind(std::string(kAssistantCue)), p.size() - kAssistantCue.size());
}

TEST(PromptRegistry, RenderNoPriorPromptIsBareWrapper) {
  const std::string p = render_prompt(get_template(PpeApproach::NoPriorPrompt), "Q?");
  EXPECT_EQ(p, "User: Q? Assistant: ");
  EXPECT_EQ(p.find("<"), std::string::npos);
}

TEST(PromptRegistry, RenderDoesNotRecurse) {
  const std::string q = "echo {question} back";
  const std::string p = render_prompt(get_template(PpeApproach::Plan), q);
  EXPECT_EQ(count_of(p, "{question}"), 1u);
  EXPECT_NE(p.find(q), std::string::npos);
}

TEST(PromptRegistry, RenderRejectsEmptyQuestion) {
  try {
    render_prompt(get_template(PpeApproach::Think), "");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyQuestion);
  }
}

TEST(PromptRegistry, RenderRoundTripRecoversQuestion) {
  // property: stripping the prefix and suffix around the question gives it back
  const std::vector<std::string> questions = {"x", "Compute $\\frac{1}{2}$.", "multi\nline\tq", "{question}", "<think>"};
  for (auto a : kAllApproaches) {
    const auto& t = get_template(a);
    const std::string prefix = render_prompt(t, "\x01");
    const auto cut = prefix.find('\x01');
    for (const auto& q : questions) {
      const std::string p = render_prompt(t, q);
      ASSERT_EQ(p.substr(0, cut), prefix.substr(0, cut));
      ASSERT_EQ(p.substr(cut, q.size()), q);
      ASSERT_EQ(p.substr(cut + q.size()), prefix.substr(cut + 1));
    }
  }
}

TEST(PromptRegistry, ValidateRejectsBrokenTemplates) {
  auto broken = get_template(PpeApproach::Think);
  broken.wrapper = "User: no placeholder Assistant: ";
  EXPECT_THROW(validate_template(broken), Error);

  broken = get_template(PpeApproach::Think);
  broken.wrapper = "User: {question} {question} Assistant: ";
  EXPECT_THROW(validate_template(broken), Error);

  broken = get_template(PpeApproach::Think);
  broken.instruction = "Think hard. Use <answer> </answer>.";
  EXPECT_THROW(validate_template(broken), Error);

  broken = get_template(PpeApproach::Think);
  broken.tag = "plan";
  EXPECT_THROW(validate_template(broken), Error);

  broken = get_template(PpeApproach::NoPriorPrompt);
  broken.tag = "think";
  EXPECT_THROW(validate_template(broken), Error);

  for (auto a : kAllApproaches) EXPECT_NO_THROW(validate_template(get_template(a)));
}

TEST(PromptRegistry, JsonRoundTripAndChecksum) {
  const auto& reg = PromptRegistry::builtin();
  const auto copy = PromptRegistry::from_json(reg.to_json());
  for (auto a : kAllApproaches) EXPECT_EQ(copy.get(a), reg.get(a));
  EXPECT_EQ(copy.checksum(), reg.checksum());
  EXPECT_EQ(reg.checksum().size(), 16u);
}

TEST(PromptRegistry, ShippedTemplateFileMatchesBuiltins) {
  const auto file = PromptRegistry::from_file(RFTKIT_TEMPLATES_FILE);
  EXPECT_EQ(file.checksum(), PromptRegistry::builtin().checksum());
}

TEST(PromptRegistry, FileOverridesOneApproach) {
  const std::string json = R"([{"approach": "plan", "tag": "plan",
    "instruction": "Plan first inside <plan> </plan>, then answer in <answer> </answer>.",
    "wrapper": "Q: {question} Assistant: "}])";
  const auto reg = PromptRegistry::from_json(json);
  EXPECT_EQ(reg.get(PpeApproach::Plan).wrapper, "Q: {question} Assistant: ");
  EXPECT_EQ(reg.get(PpeApproach::Think), get_template(PpeApproach::Think));
  EXPECT_NE(reg.checksum(), PromptRegistry::builtin().checksum());
}

TEST(PromptRegistry, FileErrors) {
  EXPECT_THROW(PromptRegistry::from_json("{}"), Error);
  EXPECT_THROW(PromptRegistry::from_json("[{\"approach\": \"cot\"}]"), Error);
  EXPECT_THROW(PromptRegistry::from_json(R"([{"approach":"none","tag":null,"instruction":"","wrapper":"{question} Assistant: ","extra":1}])"),
               Error);
  const std::string dup = R"([{"approach":"none","tag":null,"instruction":"","wrapper":"{question} Assistant: "},
                              {"approach":"none","tag":null,"instruction":"","wrapper":"{question} Assistant: "}])";
  EXPECT_THROW(PromptRegistry::from_json(dup), Error);
  try {
    PromptRegistry::from_file("/nonexistent/templates.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FileNotFound);
  }
}
