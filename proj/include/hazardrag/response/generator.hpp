#pragma once

#include "hazardrag/llm/client.hpp"
#include "hazardrag/memory/memory_bank.hpp"
#include "hazardrag/types.hpp"

#include <chrono>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hazardrag::response {

inline constexpr std::string_view kContextSlot = "{context}";
inline constexpr std::string_view kMemorySlot = "{memory}";
inline constexpr std::string_view kQuestionSlot = "{question}";

// Sentence every web-branch template must carry.
inline constexpr std::string_view kUncertaintyInstruction =
    "State clearly that this evidence comes from web search results outside the curated knowledge "
    "base, and say where it is incomplete, dated or uncertain.";

struct TemplateSet {
    std::string document;
    std::string structured;
    std::string web;

    const std::string& for_branch(Pathway branch) const;
};

const TemplateSet& default_templates();

/// Reads document.txt, structured.txt and web.txt from `dir`; files that are
/// missing keep the default. Error(InvalidConfig) when a template lacks one
/// of the three slots.
TemplateSet load_templates(const std::filesystem::path& dir);

void check_template(const std::string& text, std::string_view name);

std::string render_context(const GroundingContext& ctx);
std::string render_memory(std::span<const memory::QaPair> pairs);

/// Fills the branch template in one pass, so slot markers that appear inside
/// evidence or the question are left alone.
std::string build_prompt(const GroundingContext& ctx, std::span<const memory::QaPair> memory_pairs,
                         const std::string& question, const TemplateSet& templates = default_templates());

struct DecodingParams {
    double temperature = 0.0;
    int max_output_tokens = 0;

    friend bool operator==(const DecodingParams&, const DecodingParams&) = default;
};

inline constexpr int kMcqMaxTokens = 16;
inline constexpr double kOpenTemperature = 0.7;
inline constexpr int kInteractiveMaxTokens = 400;

/// MCQ: greedy. Open-ended: 0.7 with 80/180/300/400 tokens by difficulty
/// (400 when unknown). Interactive: 0.7, 400 tokens.
DecodingParams decoding_params(TaskKind task, std::optional<Difficulty> difficulty = std::nullopt);

/// ClientFailure propagates.
std::string generate_answer(const std::string& prompt, llm::GenerativeModelClient& client, TaskKind task,
                            std::optional<Difficulty> difficulty = std::nullopt);

struct AnswerEnvelope {
    std::string answer_text;
    Pathway pathway = Pathway::DocumentRetrieval;
    std::vector<std::string> sources;
    bool degraded = false;
    memory::Timestamp timestamp{};
};

/// Passage source ids in context order, "<sql> [N rows]", or URLs.
std::vector<std::string> sources_for(const GroundingContext& ctx);

AnswerEnvelope respond(const GroundingContext& ctx, std::span<const memory::QaPair> memory_pairs,
                       const std::string& question, llm::GenerativeModelClient& client,
                       TaskKind task = TaskKind::Interactive,
                       std::optional<Difficulty> difficulty = std::nullopt,
                       const TemplateSet& templates = default_templates());

}  // namespace hazardrag::response
