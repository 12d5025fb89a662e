#pragma once

#include "hazardrag/llm/client.hpp"
#include "hazardrag/memory/memory_bank.hpp"
#include "hazardrag/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace hazardrag::query {

struct StructuredQueryRepresentation {
    std::string original_query;
    std::string rewritten_query;
    QueryType query_type = QueryType::Other;
    bool is_ambiguous = false;
    bool is_domain_relevant = true;
    EntityTags entity_tags;
    bool degraded = false;  // a model call failed and a fallback value was used

    friend bool operator==(const StructuredQueryRepresentation&,
                           const StructuredQueryRepresentation&) = default;
};

// Decoding parameters per call class.
inline constexpr double kRewriteTemperature = 0.3;
inline constexpr int kRewriteMaxTokens = 100;
inline constexpr double kLabelTemperature = 0.0;
inline constexpr int kLabelMaxTokens = 100;

inline constexpr std::string_view kDefaultKnowledgeScope =
    "hazard preparedness, response, recovery and policy documents (hurricanes, floods, storm "
    "surge, wildfire, extreme heat, drought) and relational impact records for past events "
    "(power outages, rainfall and stream flooding, evacuation rates, building damage, "
    "preparedness activity at essential facilities) by zip code and census tract";

struct RewriteResult {
    std::string query;
    bool degraded = false;
};

/// Resolves references against up to three prior turns (oldest first). With
/// no turns the client is not called and the query is returned verbatim.
/// Client failure or an empty reply degrades to the original query.
RewriteResult rewrite_query(const std::string& query, std::span<const memory::MemoryEntry> turns,
                            llm::GenerativeModelClient& client);

struct Classification {
    QueryType type = QueryType::Other;
    bool is_ambiguous = true;
    bool is_domain_relevant = true;
    bool parsed = false;

    friend bool operator==(const Classification&, const Classification&) = default;
};

/// Parses `TYPE=<label>;AMBIGUOUS=<0|1>;DOMAIN=<0|1>` from any line of the reply.
std::optional<Classification> parse_classification(std::string_view reply);

/// Unparsable replies and client failures yield Other, ambiguous, in-domain.
Classification classify_query(const std::string& rewritten, llm::GenerativeModelClient& client,
                              std::string_view knowledge_scope = kDefaultKnowledgeScope);

/// Reads `{"disaster_types": [...], "locations": [...]}` out of the reply.
std::optional<EntityTags> parse_entity_tags(std::string_view reply);

/// Client failures and unparsable replies yield empty tags.
EntityTags extract_entity_tags(const std::string& rewritten, llm::GenerativeModelClient& client);

std::string build_rewrite_prompt(const std::string& query,
                                 std::span<const memory::MemoryEntry> turns);
std::string build_classify_prompt(const std::string& rewritten, std::string_view knowledge_scope);
std::string build_entity_prompt(const std::string& rewritten);

struct UnderstandingOptions {
    std::string knowledge_scope = std::string(kDefaultKnowledgeScope);
    std::size_t rewrite_turns = memory::kRewriteTurns;
};

/// rewrite -> classify -> tag. Memory for the rewrite is looked up with the
/// stored tags the raw query mentions, falling back to recency.
StructuredQueryRepresentation understand(const std::string& query,
                                         const memory::SessionMemory& session,
                                         llm::GenerativeModelClient& client,
                                         const UnderstandingOptions& options = {});

}  // namespace hazardrag::query
