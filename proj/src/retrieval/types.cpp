#include "hazardrag/retrieval/types.hpp"

#include "hazardrag/error.hpp"
#include "hazardrag/text.hpp"

#include <algorithm>

namespace hazardrag::retrieval {

std::string_view to_label(RetrievalStrategy strategy) noexcept {
    switch (strategy) {
        case RetrievalStrategy::Keyword: return "keyword";
        case RetrievalStrategy::Vector: return "vector";
        case RetrievalStrategy::Hybrid: return "hybrid";
    }
    return "hybrid";
}

std::optional<RetrievalStrategy> parse_strategy(std::string_view label) noexcept {
    const auto lowered = text::to_lower(text::trim(label));
    for (auto s : kAllStrategies) {
        if (lowered == to_label(s)) return s;
    }
    return std::nullopt;
}

std::string_view to_label(Channel channel) noexcept {
    switch (channel) {
        case Channel::Keyword: return "keyword";
        case Channel::Vector: return "vector";
        case Channel::Merged: return "merged";
        case Channel::Reranked: return "reranked";
    }
    return "keyword";
}

void validate(const RetrievalConfig& config) {
    if (config.pool_size == 0 || config.rerank_k == 0 || config.rerank_batch == 0) {
        throw Error(ErrorCode::InvalidConfig, "retrieval sizes must be positive");
    }
    if (config.rerank_k > config.pool_size) {
        throw Error(ErrorCode::InvalidConfig, "rerank depth exceeds candidate pool size");
    }
}

bool ranks_before(const ScoredPassage& a, const ScoredPassage& b) noexcept {
    if (a.score != b.score) return a.score > b.score;
    return a.passage_id < b.passage_id;
}

void sort_ranked(std::vector<ScoredPassage>& list) {
    std::sort(list.begin(), list.end(), ranks_before);
}

}  // namespace hazardrag::retrieval
