#pragma once

#include "hazardrag/knowledge/corpus.hpp"
#include "hazardrag/retrieval/types.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hazardrag::retrieval {

/// Cross-encoder seam: one score per passage, order-aligned with the input.
/// Error(ScorerFailure) on backend errors.
class RerankScorer {
public:
    virtual ~RerankScorer() = default;
    virtual std::vector<double> score(std::string_view query,
                                      std::span<const std::string> passages) = 0;
};

/// Fraction of distinct query terms present in the passage.
class TokenOverlapScorer : public RerankScorer {
public:
    std::vector<double> score(std::string_view query,
                              std::span<const std::string> passages) override;
};

/// POSTs {query, passages[]} and expects {scores[]}.
class HttpRerankScorer : public RerankScorer {
public:
    struct Options {
        std::string url;
        std::string api_key;
        int timeout_seconds = 60;
    };

    explicit HttpRerankScorer(Options options) : options_(std::move(options)) {}
    std::vector<double> score(std::string_view query,
                              std::span<const std::string> passages) override;

private:
    Options options_;
};

struct RerankResult {
    std::vector<ScoredPassage> passages;
    bool degraded = false;
};

/// Scores every pool entry in batches of `batch` and keeps the best
/// min(k, |pool|). If the scorer fails, the pool order truncated to k is
/// returned with degraded set.
RerankResult rerank(std::string_view query, const CandidatePool& pool, std::size_t k,
                    RerankScorer& scorer, std::size_t batch, const knowledge::Corpus& corpus);

}  // namespace hazardrag::retrieval
