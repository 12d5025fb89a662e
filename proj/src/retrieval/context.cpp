#include "hazardrag/retrieval/context.hpp"

#include "hazardrag/text.hpp"

namespace hazardrag::retrieval {

GroundingContext assemble_context(std::span<const knowledge::Passage> passages, TaskKind task) {
    GroundingContext ctx;
    ctx.branch = Pathway::DocumentRetrieval;

    if (task == TaskKind::Mcq) {
        std::size_t remaining = kMcqContextBudget;
        for (const auto& p : passages) {
            if (remaining == 0) break;
            const auto tokens = text::count_tokens(p.text);
            if (tokens <= remaining) {
                ctx.units.push_back({p.source_id, p.text, tokens});
                remaining -= tokens;
            } else {
                ctx.units.push_back({p.source_id, text::truncate_tokens(p.text, remaining), remaining});
                remaining = 0;
            }
        }
    } else {
        for (const auto& p : passages) {
            const auto tokens = text::count_tokens(p.text);
            if (tokens <= kPassageTokenBudget) {
                ctx.units.push_back({p.source_id, p.text, tokens});
            } else {
                ctx.units.push_back(
                    {p.source_id, text::truncate_tokens(p.text, kPassageTokenBudget), kPassageTokenBudget});
            }
        }
    }
    for (const auto& u : ctx.units) ctx.total_tokens += u.token_count;
    return ctx;
}

}  // namespace hazardrag::retrieval
