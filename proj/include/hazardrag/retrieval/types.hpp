#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hazardrag::retrieval {

enum class RetrievalStrategy { Keyword, Vector, Hybrid };

inline constexpr RetrievalStrategy kAllStrategies[] = {
    RetrievalStrategy::Keyword, RetrievalStrategy::Vector, RetrievalStrategy::Hybrid};

std::string_view to_label(RetrievalStrategy strategy) noexcept;
std::optional<RetrievalStrategy> parse_strategy(std::string_view label) noexcept;

struct RetrievalConfig {
    RetrievalStrategy strategy = RetrievalStrategy::Hybrid;
    std::size_t pool_size = 100;   // candidate pool depth before reranking
    std::size_t rerank_k = 5;      // passages kept after reranking
    std::size_t rerank_batch = 128;

    friend bool operator==(const RetrievalConfig&, const RetrievalConfig&) = default;
};

/// Error(InvalidConfig) unless all sizes are positive and rerank_k <= pool_size.
void validate(const RetrievalConfig& config);

enum class Channel { Keyword, Vector, Merged, Reranked };

std::string_view to_label(Channel channel) noexcept;

struct ScoredPassage {
    std::string passage_id;
    Channel channel = Channel::Keyword;
    double score = 0.0;

    friend bool operator==(const ScoredPassage&, const ScoredPassage&) = default;
};

/// Descending score, then ascending passage id.
bool ranks_before(const ScoredPassage& a, const ScoredPassage& b) noexcept;
void sort_ranked(std::vector<ScoredPassage>& list);

struct CandidatePool {
    std::vector<ScoredPassage> entries;  // unique ids, ranked
    std::size_t requested = 0;

    friend bool operator==(const CandidatePool&, const CandidatePool&) = default;
};

}  // namespace hazardrag::retrieval
