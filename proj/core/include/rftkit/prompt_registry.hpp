#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace rftkit {

/// Prior-prompt approaches. The first five each own a response tag named after
/// the approach; NoPriorPrompt trains without instructions or format reward.
enum class PpeApproach { Think, Plan, Code, Knowledge, Examples, NoPriorPrompt };

inline constexpr std::array<PpeApproach, 6> kAllApproaches = {
    PpeApproach::Think,     PpeApproach::Plan,     PpeApproach::Code,
    PpeApproach::Knowledge, PpeApproach::Examples, PpeApproach::NoPriorPrompt};

/// Wire names: "think", "plan", "code", "knowledge", "examples", "none".
std::string_view to_string(PpeApproach approach) noexcept;
std::optional<PpeApproach> parse_approach(std::string_view name) noexcept;

/// Tag the format reward expects for `approach`; nullopt for NoPriorPrompt.
std::optional<std::string> expected_tag(PpeApproach approach);

/// ASCII lowercase letters, digits and '_' only, nonempty.
bool is_valid_tag_name(std::string_view name) noexcept;

inline constexpr std::string_view kQuestionPlaceholder = "{question}";
inline constexpr std::string_view kAssistantCue = "Assistant: ";

struct PriorPromptTemplate {
  PpeApproach approach = PpeApproach::NoPriorPrompt;
  std::optional<std::string> tag;
  std::string instruction;
  std::string wrapper;

  friend bool operator==(const PriorPromptTemplate&, const PriorPromptTemplate&) = default;
};

/// Throws Error(InvalidTemplate) when the template breaks its invariants.
void validate_template(const PriorPromptTemplate& tmpl);

/// Instruction, a single space, then the wrapper with `question` substituted
/// once (never recursively). Throws Error(EmptyQuestion).
std::string render_prompt(const PriorPromptTemplate& tmpl, std::string_view question);

/// Immutable set of six templates. Built-in defaults can be overridden per
/// approach from a JSON template file.
class PromptRegistry {
 public:
  static const PromptRegistry& builtin();
  /// File is a JSON array of {"approach", "tag", "instruction", "wrapper"}.
  /// Approaches missing from the file keep their built-in template.
  static PromptRegistry from_file(const std::filesystem::path& path);
  static PromptRegistry from_json(std::string_view json_text);

  const PriorPromptTemplate& get(PpeApproach approach) const;

  /// Template file content reproducing this registry.
  std::string to_json() const;
  /// FNV-1a 64 over to_json(), as 16 hex digits.
  std::string checksum() const;

 private:
  PromptRegistry();
  std::array<PriorPromptTemplate, kAllApproaches.size()> templates_;
};

/// Built-in template for `approach`.
const PriorPromptTemplate& get_template(PpeApproach approach);

}  // namespace rftkit
