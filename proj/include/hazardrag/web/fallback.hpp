#pragma once

#include "hazardrag/query/understanding.hpp"
#include "hazardrag/types.hpp"
#include "hazardrag/web/search.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace hazardrag::web {

inline constexpr std::size_t kDefaultSnippetLimit = 10;

/// Names used to spot snippets about some other place or event. Events are
/// named storms and similar; generic hazard words are deliberately absent
/// since they co-occur with any event.
struct Gazetteer {
    std::vector<std::string> locations;
    std::vector<std::string> events;
    // place -> regions that contain it ("houston" -> {"harris county", "texas"})
    std::map<std::string, std::vector<std::string>> enclosing;
};

const Gazetteer& default_gazetteer();

/// {"locations": [...], "events": [...], "enclosing": {"place": [...]}}
Gazetteer load_gazetteer(const std::filesystem::path& path);

/// Rewritten query followed by every tag not already present in it.
std::string formulate_search_query(const query::StructuredQueryRepresentation& sqr);

struct FetchResult {
    std::vector<WebSnippet> snippets;
    bool degraded = false;
};

/// At most `limit` snippets in provider order. Search failures come back as
/// an empty degraded result. Pre: limit >= 1.
FetchResult fetch_snippets(const std::string& query, SearchClient& client,
                           std::size_t limit = kDefaultSnippetLimit);

/// Four-digit years 1900..2099 appearing as standalone tokens.
std::vector<std::string> find_years(std::string_view text);

/// Order-preserving selection, checked for locations and for events
/// separately. A snippet that names a gazetteer entry unrelated to the tags
/// is dropped unless it is also anchored to them: it names a related entry
/// (same name, or one place enclosing the other), or, for locations, it
/// mentions a tag verbatim. Generic hazard words never anchor. A snippet
/// whose years all differ from the request's years is dropped.
std::vector<WebSnippet> filter_snippets(const std::vector<WebSnippet>& snippets,
                                        const query::StructuredQueryRepresentation& sqr,
                                        const Gazetteer& gazetteer = default_gazetteer());

struct FallbackOptions {
    std::size_t limit = kDefaultSnippetLimit;
    Gazetteer gazetteer = default_gazetteer();
};

/// Units are (url, snippet) pairs, each snippet cut to the per-passage token
/// budget. No surviving snippet means an empty degraded context.
GroundingContext fallback_flow(const query::StructuredQueryRepresentation& sqr, SearchClient& client,
                               const FallbackOptions& options = {});

}  // namespace hazardrag::web
