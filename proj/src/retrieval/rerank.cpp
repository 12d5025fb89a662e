#include "hazardrag/retrieval/rerank.hpp"

#include "hazardrag/error.hpp"
#include "hazardrag/http_json.hpp"
#include "hazardrag/text.hpp"

#include <algorithm>
#include <set>

namespace hazardrag::retrieval {

std::vector<double> TokenOverlapScorer::score(std::string_view query,
                                              std::span<const std::string> passages) {
    const auto q = text::analyze(query);
    const std::set<std::string> query_terms(q.begin(), q.end());
    std::vector<double> out;
    out.reserve(passages.size());
    for (const auto& passage : passages) {
        if (query_terms.empty()) {
            out.push_back(0.0);
            continue;
        }
        const auto p = text::analyze(passage);
        const std::set<std::string> passage_terms(p.begin(), p.end());
        std::size_t hits = 0;
        for (const auto& t : query_terms) hits += passage_terms.count(t);
        out.push_back(static_cast<double>(hits) / static_cast<double>(query_terms.size()));
    }
    return out;
}

std::vector<double> HttpRerankScorer::score(std::string_view query,
                                            std::span<const std::string> passages) {
    nlohmann::json body = {
        {"query", std::string(query)},
        {"passages", std::vector<std::string>(passages.begin(), passages.end())},
    };
    std::map<std::string, std::string> headers;
    if (!options_.api_key.empty()) headers["Authorization"] = "Bearer " + options_.api_key;
    std::vector<double> scores;
    try {
        const auto reply = http::post_json(options_.url, body, headers, options_.timeout_seconds);
        scores = reply.at("scores").get<std::vector<double>>();
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ScorerFailure, e.what());
    }
    if (scores.size() != passages.size()) {
        throw Error(ErrorCode::ScorerFailure, "reranker returned a misaligned score list");
    }
    return scores;
}

RerankResult rerank(std::string_view query, const CandidatePool& pool, std::size_t k,
                    RerankScorer& scorer, std::size_t batch, const knowledge::Corpus& corpus) {
    if (k == 0) throw Error(ErrorCode::InvalidConfig, "rerank depth must be positive");
    if (batch == 0) throw Error(ErrorCode::InvalidConfig, "rerank batch must be positive");

    const auto keep = std::min(k, pool.entries.size());
    RerankResult result;
    try {
        std::vector<ScoredPassage> scored;
        scored.reserve(pool.entries.size());
        for (std::size_t start = 0; start < pool.entries.size(); start += batch) {
            const auto end = std::min(pool.entries.size(), start + batch);
            std::vector<std::string> texts;
            texts.reserve(end - start);
            for (std::size_t i = start; i < end; ++i) {
                const auto* passage = corpus.find(pool.entries[i].passage_id);
                if (passage == nullptr) {
                    throw Error(ErrorCode::InvalidConfig,
                                "pool entry " + pool.entries[i].passage_id + " is not in the corpus");
                }
                texts.push_back(passage->text);
            }
            const auto scores = scorer.score(query, texts);
            if (scores.size() != texts.size()) {
                throw Error(ErrorCode::ScorerFailure, "scorer returned a misaligned score list");
            }
            for (std::size_t i = start; i < end; ++i) {
                scored.push_back({pool.entries[i].passage_id, Channel::Reranked, scores[i - start]});
            }
        }
        std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                          scored.end(), ranks_before);
        scored.resize(keep);
        result.passages = std::move(scored);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ScorerFailure) throw;
        result.passages.assign(pool.entries.begin(),
                               pool.entries.begin() + static_cast<std::ptrdiff_t>(keep));
        result.degraded = true;
    }
    return result;
}

}  // namespace hazardrag::retrieval
