#include "hazardrag/retrieval/fusion.hpp"

#include <algorithm>
#include <map>

namespace hazardrag::retrieval {

namespace {

// Best positive score per passage, divided by the channel maximum.
std::map<std::string, double> normalized_channel(const std::vector<ScoredPassage>& channel) {
    std::map<std::string, double> best;
    for (const auto& p : channel) {
        if (!(p.score > 0.0)) continue;
        auto [it, inserted] = best.emplace(p.passage_id, p.score);
        if (!inserted) it->second = std::max(it->second, p.score);
    }
    double max = 0.0;
    for (const auto& [id, s] : best) max = std::max(max, s);
    for (auto& [id, s] : best) s /= max;
    return best;
}

}  // namespace

std::vector<ScoredPassage> hybrid_merge(const std::vector<ScoredPassage>& keyword,
                                        const std::vector<ScoredPassage>& vector) {
    const auto kw = normalized_channel(keyword);
    const auto vec = normalized_channel(vector);

    std::map<std::string, double> merged;
    for (const auto& [id, s] : kw) merged[id] += kKeywordWeight * s;
    for (const auto& [id, s] : vec) merged[id] += kVectorWeight * s;

    std::vector<ScoredPassage> out;
    out.reserve(merged.size());
    for (const auto& [id, s] : merged) out.push_back({id, Channel::Merged, s});
    sort_ranked(out);
    return out;
}

CandidatePool build_candidate_pool(const std::vector<ScoredPassage>& results,
                                   std::size_t pool_size) {
    std::map<std::string, ScoredPassage> best;
    for (const auto& r : results) {
        auto [it, inserted] = best.emplace(r.passage_id, r);
        if (!inserted && r.score > it->second.score) it->second = r;
    }
    CandidatePool pool;
    pool.requested = pool_size;
    pool.entries.reserve(best.size());
    for (auto& [id, p] : best) pool.entries.push_back(std::move(p));
    sort_ranked(pool.entries);
    if (pool.entries.size() > pool_size) pool.entries.resize(pool_size);
    return pool;
}

}  // namespace hazardrag::retrieval
