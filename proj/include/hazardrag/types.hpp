#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hazardrag {

/// Evidence-access pathway a request is dispatched to.
enum class Pathway { DocumentRetrieval, StructuredAccess, WebFallback };

/// Wire label: "document", "structured" or "web".
std::string_view to_label(Pathway pathway) noexcept;
std::optional<Pathway> parse_pathway(std::string_view label) noexcept;

enum class QueryType { Quantitative, Descriptive, Explanatory, Locational, Contextual, Other };

inline constexpr QueryType kAllQueryTypes[] = {
    QueryType::Quantitative, QueryType::Descriptive, QueryType::Explanatory,
    QueryType::Locational,   QueryType::Contextual,  QueryType::Other,
};

/// Lowercase label, e.g. "quantitative".
std::string_view to_label(QueryType type) noexcept;
std::optional<QueryType> parse_query_type(std::string_view label) noexcept;

/// Disaster-type and location references. Entries are kept lowercased and trimmed.
struct EntityTags {
    std::vector<std::string> disaster_types;
    std::vector<std::string> locations;

    bool empty() const noexcept { return disaster_types.empty() && locations.empty(); }
    friend bool operator==(const EntityTags&, const EntityTags&) = default;
};

/// Lowercases, trims and drops blank or duplicate entries, preserving first-seen order.
EntityTags normalize_tags(EntityTags tags);

enum class TaskKind { Mcq, OpenEnded, Interactive };

enum class Difficulty { Easy, Medium, Hard, Extreme };

std::string_view to_label(Difficulty difficulty) noexcept;
std::optional<Difficulty> parse_difficulty(std::string_view label) noexcept;

/// One piece of evidence handed to generation: a passage, a result row or a web snippet.
struct ContextUnit {
    std::string source_id;
    std::string text;
    std::size_t token_count = 0;

    friend bool operator==(const ContextUnit&, const ContextUnit&) = default;
};

struct SqlProvenance {
    std::string statement;
    std::vector<std::string> columns;
    std::size_t row_count = 0;

    friend bool operator==(const SqlProvenance&, const SqlProvenance&) = default;
};

/// Branch-tagged evidence bundle consumed by response generation.
struct GroundingContext {
    Pathway branch = Pathway::DocumentRetrieval;
    std::vector<ContextUnit> units;
    std::size_t total_tokens = 0;
    bool degraded = false;
    std::optional<SqlProvenance> sql;

    bool empty() const noexcept { return units.empty(); }
    friend bool operator==(const GroundingContext&, const GroundingContext&) = default;
};

}  // namespace hazardrag
