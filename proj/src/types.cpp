#include "hazardrag/error.hpp"
#include "hazardrag/text.hpp"
#include "hazardrag/types.hpp"

#include <algorithm>

namespace hazardrag {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::EmptyText: return "EmptyText";
        case ErrorCode::MalformedRecord: return "MalformedRecord";
        case ErrorCode::SchemaRowMismatch: return "SchemaRowMismatch";
        case ErrorCode::InvalidSchema: return "InvalidSchema";
        case ErrorCode::EmptyCorpus: return "EmptyCorpus";
        case ErrorCode::EmbedderFailure: return "EmbedderFailure";
        case ErrorCode::ScorerFailure: return "ScorerFailure";
        case ErrorCode::ClientFailure: return "ClientFailure";
        case ErrorCode::SearchFailure: return "SearchFailure";
        case ErrorCode::NonMonotonicTimestamp: return "NonMonotonicTimestamp";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::EmptyKeypoints: return "EmptyKeypoints";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::InvalidSnapshot: return "InvalidSnapshot";
        case ErrorCode::ExecutionError: return "ExecutionError";
        case ErrorCode::TranslationFailed: return "TranslationFailed";
        case ErrorCode::UnknownSession: return "UnknownSession";
        case ErrorCode::NotReady: return "NotReady";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

std::string_view to_label(Pathway pathway) noexcept {
    switch (pathway) {
        case Pathway::DocumentRetrieval: return "document";
        case Pathway::StructuredAccess: return "structured";
        case Pathway::WebFallback: return "web";
    }
    return "document";
}

std::optional<Pathway> parse_pathway(std::string_view label) noexcept {
    if (label == "document") return Pathway::DocumentRetrieval;
    if (label == "structured") return Pathway::StructuredAccess;
    if (label == "web") return Pathway::WebFallback;
    return std::nullopt;
}

std::string_view to_label(QueryType type) noexcept {
    switch (type) {
        case QueryType::Quantitative: return "quantitative";
        case QueryType::Descriptive: return "descriptive";
        case QueryType::Explanatory: return "explanatory";
        case QueryType::Locational: return "locational";
        case QueryType::Contextual: return "contextual";
        case QueryType::Other: return "other";
    }
    return "other";
}

std::optional<QueryType> parse_query_type(std::string_view label) noexcept {
    const auto lowered = text::to_lower(text::trim(label));
    for (auto type : kAllQueryTypes) {
        if (lowered == to_label(type)) return type;
    }
    return std::nullopt;
}

std::string_view to_label(Difficulty difficulty) noexcept {
    switch (difficulty) {
        case Difficulty::Easy: return "easy";
        case Difficulty::Medium: return "medium";
        case Difficulty::Hard: return "hard";
        case Difficulty::Extreme: return "extreme";
    }
    return "medium";
}

std::optional<Difficulty> parse_difficulty(std::string_view label) noexcept {
    const auto lowered = text::to_lower(text::trim(label));
    if (lowered == "easy") return Difficulty::Easy;
    if (lowered == "medium") return Difficulty::Medium;
    if (lowered == "hard") return Difficulty::Hard;
    if (lowered == "extreme" || lowered == "extremely complex" || lowered == "extremely_complex")
        return Difficulty::Extreme;
    return std::nullopt;
}

namespace {

void normalize_list(std::vector<std::string>& list) {
    std::vector<std::string> out;
    for (auto& entry : list) {
        auto tag = text::to_lower(text::trim(entry));
        if (tag.empty() || std::find(out.begin(), out.end(), tag) != out.end()) continue;
        out.push_back(std::move(tag));
    }
    list = std::move(out);
}

}  // namespace

EntityTags normalize_tags(EntityTags tags) {
    normalize_list(tags.disaster_types);
    normalize_list(tags.locations);
    return tags;
}

}  // namespace hazardrag
