#pragma once

#include "hazardrag/knowledge/corpus.hpp"
#include "hazardrag/types.hpp"

#include <cstddef>
#include <span>

namespace hazardrag::retrieval {

inline constexpr std::size_t kMcqContextBudget = 6000;
inline constexpr std::size_t kPassageTokenBudget = 512;

/// MCQ: passages in order until the 6,000-token cap; the first passage that
/// does not fit is cut to the remaining budget and the rest are dropped.
/// OpenEnded and Interactive: every passage cut to 512 tokens.
GroundingContext assemble_context(std::span<const knowledge::Passage> passages, TaskKind task);

}  // namespace hazardrag::retrieval
