#pragma once

#include "hazardrag/retrieval/types.hpp"

#include <cstddef>
#include <vector>

namespace hazardrag::retrieval {

inline constexpr double kKeywordWeight = 0.5;
inline constexpr double kVectorWeight = 0.5;

/// Max-normalizes each channel and combines them with equal weights; a
/// passage missing from a channel gets 0 from it. Non-positive channel scores
/// carry no evidence and are ignored, so every merged score is in (0, 1].
/// Output is deduplicated and ranked.
std::vector<ScoredPassage> hybrid_merge(const std::vector<ScoredPassage>& keyword,
                                        const std::vector<ScoredPassage>& vector);

/// Keeps the best score per passage id, ranks, truncates to `pool_size`.
CandidatePool build_candidate_pool(const std::vector<ScoredPassage>& results,
                                   std::size_t pool_size);

}  // namespace hazardrag::retrieval
