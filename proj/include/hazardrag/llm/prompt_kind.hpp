#pragma once

#include <optional>
#include <string_view>

namespace hazardrag::llm {

// Every prompt built by this library opens with one of these task lines, so
// stubs and call recorders can tell the call classes apart.
enum class PromptKind {
    Rewrite,
    Classify,
    EntityTags,
    TextToSql,
    Answer,
    McqAnswer,
    OpenAnswer,
    KeypointJudge,
};

inline constexpr std::string_view kRewriteTask =
    "Task: Rewrite the latest user request as a fully self-contained query.";
inline constexpr std::string_view kClassifyTask = "Task: Classify the disaster information request.";
inline constexpr std::string_view kEntityTask =
    "Task: Extract disaster-type and location references from the request.";
inline constexpr std::string_view kSqlTask =
    "Task: Generate an executable SQL query from a natural-language disaster information request.";
inline constexpr std::string_view kAnswerTask =
    "Task: Answer the disaster information request using the evidence provided.";
inline constexpr std::string_view kMcqTask = "Task: Answer the multiple-choice question.";
inline constexpr std::string_view kOpenTask = "Task: Answer the open-ended question.";
inline constexpr std::string_view kJudgeTask =
    "Task: Decide whether the response supports the keypoint.";

std::optional<PromptKind> detect_prompt_kind(std::string_view prompt) noexcept;
std::string_view to_label(PromptKind kind) noexcept;
std::optional<PromptKind> parse_prompt_kind(std::string_view label) noexcept;

}  // namespace hazardrag::llm
