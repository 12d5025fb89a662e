#include "hazardrag/query/understanding.hpp"

#include "hazardrag/error.hpp"
#include "hazardrag/llm/prompt_kind.hpp"
#include "hazardrag/text.hpp"

#include <nlohmann/json.hpp>

#include <regex>

namespace hazardrag::query {

using nlohmann::json;

std::string build_rewrite_prompt(const std::string& query,
                                 std::span<const memory::MemoryEntry> turns) {
    std::string p(llm::kRewriteTask);
    p += "\nReplace pronouns and implicit references (for example \"it\", \"there\", \"this event\", "
         "\"those counties\") with the explicit entities they refer to in the conversation "
         "history. Keep the intent and wording of the request otherwise. If the request is "
         "already self-contained, return it unchanged.\n"
         "Output only the rewritten query.\n\n"
         "Conversation history (oldest first):\n";
    for (std::size_t i = 0; i < turns.size(); ++i) {
        const auto n = std::to_string(i + 1);
        p += "Q" + n + ": " + turns[i].user_query + "\n";
        p += "A" + n + ": " + turns[i].answer + "\n";
    }
    p += "\nLatest request: " + query + "\n";
    return p;
}

std::string build_classify_prompt(const std::string& rewritten, std::string_view knowledge_scope) {
    std::string p(llm::kClassifyTask);
    p += "\nAssign exactly one query type:\n"
         "- quantitative: field-indexed, numerical or aggregate values (counts, rates, totals, "
         "rankings)\n"
         "- descriptive: definitions, procedural guidance or factual summaries\n"
         "- explanatory: causes, mechanisms or interpretation\n"
         "- locational: geographic scope or place-specific conditions\n"
         "- contextual: only interpretable through earlier conversation\n"
         "- other: anything else\n"
         "Set AMBIGUOUS=1 if the request can reasonably be read in more than one way.\n"
         "Set DOMAIN=1 if the internal knowledge base can answer the request. It covers: ";
    p += knowledge_scope;
    p += ". Set DOMAIN=0 for requests outside that coverage, such as forecasts, predictive "
         "modelling or events the knowledge base does not hold.\n"
         "Respond with a single line in exactly this format:\n"
         "TYPE=<label>;AMBIGUOUS=<0|1>;DOMAIN=<0|1>\n\n"
         "Request: ";
    p += rewritten;
    p += "\n";
    return p;
}

std::string build_entity_prompt(const std::string& rewritten) {
    std::string p(llm::kEntityTask);
    p += "\nList every disaster type or named disaster event (for example \"hurricane harvey\", "
         "\"flood\") and every geographic reference (city, county, state, zip code) in the "
         "request.\n"
         "Respond with a JSON object: {\"disaster_types\": [...], \"locations\": [...]}. Use "
         "empty lists when nothing is mentioned.\n\n"
         "Request: ";
    p += rewritten;
    p += "\n";
    return p;
}

RewriteResult rewrite_query(const std::string& query, std::span<const memory::MemoryEntry> turns,
                            llm::GenerativeModelClient& client) {
    if (turns.size() > memory::kRewriteTurns) {
        throw Error(ErrorCode::InvalidConfig, "rewrite accepts at most three prior turns");
    }
    if (turns.empty()) return {query, false};
    try {
        auto reply = text::trim(client.generate(
            {build_rewrite_prompt(query, turns), kRewriteTemperature, kRewriteMaxTokens}));
        // Models sometimes wrap the query in quotes.
        if (reply.size() >= 2 && reply.front() == '"' && reply.back() == '"') {
            reply = text::trim(reply.substr(1, reply.size() - 2));
        }
        if (reply.empty()) return {query, true};
        return {reply, false};
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ClientFailure) throw;
        return {query, true};
    }
}

std::optional<Classification> parse_classification(std::string_view reply) {
    static const std::regex pattern(
        R"(TYPE\s*=\s*([A-Za-z]+)\s*;\s*AMBIGUOUS\s*=\s*([01])\s*;\s*DOMAIN\s*=\s*([01]))",
        std::regex::icase);
    std::match_results<std::string_view::const_iterator> m;
    if (!std::regex_search(reply.begin(), reply.end(), m, pattern)) return std::nullopt;
    const auto type = parse_query_type(m[1].str());
    if (!type) return std::nullopt;
    return Classification{*type, m[2].str() == "1", m[3].str() == "1", true};
}

Classification classify_query(const std::string& rewritten, llm::GenerativeModelClient& client,
                              std::string_view knowledge_scope) {
    const Classification fallback{QueryType::Other, true, true, false};
    try {
        const auto reply = client.generate(
            {build_classify_prompt(rewritten, knowledge_scope), kLabelTemperature, kLabelMaxTokens});
        return parse_classification(reply).value_or(fallback);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ClientFailure) throw;
        return fallback;
    }
}

std::optional<EntityTags> parse_entity_tags(std::string_view reply) {
    const auto open = reply.find('{');
    const auto close = reply.rfind('}');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
        return std::nullopt;
    }
    try {
        const auto obj = json::parse(reply.substr(open, close - open + 1));
        EntityTags tags;
        const auto read = [&](const char* key, std::vector<std::string>& out) {
            const auto it = obj.find(key);
            if (it == obj.end() || !it->is_array()) return;
            for (const auto& v : *it) {
                if (v.is_string()) out.push_back(v.get<std::string>());
            }
        };
        read("disaster_types", tags.disaster_types);
        read("locations", tags.locations);
        return normalize_tags(std::move(tags));
    } catch (const json::exception&) {
        return std::nullopt;
    }
}

EntityTags extract_entity_tags(const std::string& rewritten, llm::GenerativeModelClient& client) {
    try {
        const auto reply =
            client.generate({build_entity_prompt(rewritten), kLabelTemperature, kLabelMaxTokens});
        return parse_entity_tags(reply).value_or(EntityTags{});
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ClientFailure) throw;
        return {};
    }
}

StructuredQueryRepresentation understand(const std::string& query,
                                         const memory::SessionMemory& session,
                                         llm::GenerativeModelClient& client,
                                         const UnderstandingOptions& options) {
    if (text::is_blank(query)) throw Error(ErrorCode::EmptyInput, "empty query");
    StructuredQueryRepresentation sqr;
    sqr.original_query = query;

    const auto turns = session.retrieve_entries(session.tags_mentioned_in(query),
                                                std::min(options.rewrite_turns, memory::kRewriteTurns));
    const auto rewrite = rewrite_query(query, turns, client);
    sqr.rewritten_query = rewrite.query;
    sqr.degraded = rewrite.degraded;

    const auto label = classify_query(sqr.rewritten_query, client, options.knowledge_scope);
    sqr.query_type = label.type;
    sqr.is_ambiguous = label.is_ambiguous;
    sqr.is_domain_relevant = label.is_domain_relevant;
    sqr.degraded = sqr.degraded || !label.parsed;

    sqr.entity_tags = extract_entity_tags(sqr.rewritten_query, client);
    return sqr;
}

}  // namespace hazardrag::query
