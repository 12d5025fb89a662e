#pragma once

#include "hazardrag/types.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hazardrag::eval {

inline constexpr std::array<char, 4> kChoiceLetters = {'A', 'B', 'C', 'D'};

struct McqItem {
    std::string id;
    std::string question;
    std::array<std::string, 4> options;  // A..D
    char gold = 'A';
};

struct OeItem {
    std::string id;
    std::string question;
    std::vector<std::string> keypoints;
    Difficulty difficulty = Difficulty::Medium;
};

/// JSON array of {"id", "question", "options": {"A".."D"}, "gold"}.
std::vector<McqItem> parse_mcq_items(std::string_view json_text);
/// JSON array of {"id", "question", "keypoints": [...], "difficulty"}.
std::vector<OeItem> parse_oe_items(std::string_view json_text);
std::vector<McqItem> load_mcq_items(const std::filesystem::path& path);
std::vector<OeItem> load_oe_items(const std::filesystem::path& path);

/// First A/B/C/D standing alone (not part of a longer word).
std::optional<char> extract_choice(std::string_view reply);

/// Numbered passages, or "(none)" when no retrieval is used.
std::string render_eval_context(std::span<const ContextUnit> units);

std::string build_mcq_prompt(const McqItem& item, std::span<const ContextUnit> context);
std::string build_oe_prompt(const OeItem& item, std::span<const ContextUnit> context);

}  // namespace hazardrag::eval
