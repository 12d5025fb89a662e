#include "hazardrag/web/fallback.hpp"

#include "hazardrag/error.hpp"
#include "hazardrag/retrieval/context.hpp"
#include "hazardrag/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>

namespace hazardrag::web {

const Gazetteer& default_gazetteer() {
    static const Gazetteer g{
        {
            "alabama", "alaska", "arizona", "arkansas", "california", "colorado", "connecticut",
            "delaware", "florida", "georgia", "hawaii", "idaho", "illinois", "indiana", "iowa",
            "kansas", "kentucky", "louisiana", "maine", "maryland", "massachusetts", "michigan",
            "minnesota", "mississippi", "missouri", "montana", "nebraska", "nevada",
            "new hampshire", "new jersey", "new mexico", "new york", "north carolina",
            "north dakota", "ohio", "oklahoma", "oregon", "pennsylvania", "puerto rico",
            "rhode island", "south carolina", "south dakota", "tennessee", "texas", "utah",
            "vermont", "virginia", "washington", "west virginia", "wisconsin", "wyoming",
            "houston", "galveston", "beaumont", "corpus christi", "san antonio", "austin", "dallas",
            "harris county", "fort bend county", "new orleans", "miami", "tampa", "fort myers",
            "charleston", "wilmington", "asheville", "los angeles", "san francisco", "phoenix",
            "chicago", "atlanta", "lahaina", "japan", "philippines", "mexico", "cuba", "jamaica",
            "bangladesh", "india", "china", "australia",
        },
        {
            "harvey", "beryl", "ike", "rita", "katrina", "ian", "irma", "maria", "michael", "ida",
            "laura", "helene", "milton", "sandy", "florence", "imelda", "allison", "andrew",
            "camille", "dorian", "hugo", "idalia", "otis", "uri",
        },
        {
            {"houston", {"harris county", "texas"}},
            {"harris county", {"texas"}},
            {"fort bend county", {"texas"}},
            {"galveston", {"texas"}},
            {"beaumont", {"texas"}},
            {"corpus christi", {"texas"}},
            {"san antonio", {"texas"}},
            {"austin", {"texas"}},
            {"dallas", {"texas"}},
            {"new orleans", {"louisiana"}},
            {"miami", {"florida"}},
            {"tampa", {"florida"}},
            {"fort myers", {"florida"}},
            {"charleston", {"south carolina"}},
            {"wilmington", {"north carolina"}},
            {"asheville", {"north carolina"}},
            {"los angeles", {"california"}},
            {"san francisco", {"california"}},
            {"phoenix", {"arizona"}},
            {"chicago", {"illinois"}},
            {"atlanta", {"georgia"}},
            {"lahaina", {"hawaii"}},
        },
    };
    return g;
}

Gazetteer load_gazetteer(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    try {
        const auto doc = nlohmann::json::parse(in);
        Gazetteer g;
        g.locations = doc.value("locations", std::vector<std::string>{});
        g.events = doc.value("events", std::vector<std::string>{});
        g.enclosing = doc.value("enclosing", std::map<std::string, std::vector<std::string>>{});
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, "gazetteer " + path.string() + ": " + e.what());
    }
}

std::string formulate_search_query(const query::StructuredQueryRepresentation& sqr) {
    std::string out = text::trim(sqr.rewritten_query.empty() ? sqr.original_query : sqr.rewritten_query);
    auto append = [&out](const std::vector<std::string>& tags) {
        for (const auto& tag : tags) {
            if (tag.empty() || text::mentions(out, tag)) continue;
            if (!out.empty()) out += ' ';
            out += tag;
        }
    };
    append(sqr.entity_tags.disaster_types);
    append(sqr.entity_tags.locations);
    return out;
}

FetchResult fetch_snippets(const std::string& query, SearchClient& client, std::size_t limit) {
    if (limit == 0) throw Error(ErrorCode::InvalidConfig, "snippet limit must be at least 1");
    FetchResult result;
    try {
        result.snippets = client.search(query, limit);
    } catch (const Error&) {
        result.degraded = true;
        return result;
    }
    if (result.snippets.size() > limit) result.snippets.resize(limit);
    return result;
}

std::vector<std::string> find_years(std::string_view s) {
    std::vector<std::string> years;
    for (std::size_t i = 0; i + 4 <= s.size(); ++i) {
        const bool start_ok = i == 0 || !std::isalnum(static_cast<unsigned char>(s[i - 1]));
        const bool end_ok = i + 4 == s.size() || !std::isalnum(static_cast<unsigned char>(s[i + 4]));
        if (!start_ok || !end_ok) continue;
        const auto y = s.substr(i, 4);
        if (!std::all_of(y.begin(), y.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            continue;
        }
        if (y.substr(0, 2) != "19" && y.substr(0, 2) != "20") continue;
        if (std::find(years.begin(), years.end(), y) == years.end()) years.emplace_back(y);
    }
    return years;
}

namespace {

bool encloses(const Gazetteer& g, const std::string& outer, const std::string& inner) {
    const auto it = g.enclosing.find(inner);
    return it != g.enclosing.end() && std::find(it->second.begin(), it->second.end(), outer) != it->second.end();
}

bool related(const Gazetteer& g, const std::string& name, const std::string& tag) {
    return text::mentions(tag, name) || text::mentions(name, tag) || encloses(g, name, tag) || encloses(g, tag, name);
}

bool consistent(const std::string& body, const std::vector<std::string>& tags,
                const std::vector<std::string>& names, const Gazetteer& g, bool tags_anchor) {
    if (tags.empty()) return true;
    bool anchored = tags_anchor && std::any_of(tags.begin(), tags.end(),
                                               [&](const std::string& t) { return text::mentions(body, t); });
    bool conflict = false;
    for (const auto& name : names) {
        if (!text::mentions(body, name)) continue;
        const bool rel = std::any_of(tags.begin(), tags.end(),
                                     [&](const std::string& t) { return related(g, name, t); });
        anchored = anchored || rel;
        conflict = conflict || !rel;
    }
    return anchored || !conflict;
}

}  // namespace

std::vector<WebSnippet> filter_snippets(const std::vector<WebSnippet>& snippets,
                                        const query::StructuredQueryRepresentation& sqr,
                                        const Gazetteer& gazetteer) {
    std::string request = sqr.rewritten_query.empty() ? sqr.original_query : sqr.rewritten_query;
    for (const auto& t : sqr.entity_tags.disaster_types) request += " " + t;
    const auto request_years = find_years(request);

    std::vector<WebSnippet> kept;
    for (const auto& s : snippets) {
        const std::string body = s.title + " \n " + s.snippet;
        if (!consistent(body, sqr.entity_tags.locations, gazetteer.locations, gazetteer, true)) continue;
        if (!consistent(body, sqr.entity_tags.disaster_types, gazetteer.events, gazetteer, false)) continue;
        if (!request_years.empty()) {
            const auto years = find_years(body);
            const bool overlap = std::any_of(years.begin(), years.end(), [&](const std::string& y) {
                return std::find(request_years.begin(), request_years.end(), y) != request_years.end();
            });
            if (!years.empty() && !overlap) continue;
        }
        kept.push_back(s);
    }
    return kept;
}

GroundingContext fallback_flow(const query::StructuredQueryRepresentation& sqr, SearchClient& client,
                               const FallbackOptions& options) {
    GroundingContext ctx;
    ctx.branch = Pathway::WebFallback;
    const auto fetched = fetch_snippets(formulate_search_query(sqr), client, options.limit);
    const auto kept = filter_snippets(fetched.snippets, sqr, options.gazetteer);
    for (const auto& s : kept) {
        std::string body = text::truncate_tokens(s.snippet, retrieval::kPassageTokenBudget);
        const std::size_t tokens = text::count_tokens(body);
        ctx.units.push_back({s.url, std::move(body), tokens});
        ctx.total_tokens += tokens;
    }
    ctx.degraded = fetched.degraded || ctx.units.empty();
    return ctx;
}

}  // namespace hazardrag::web
