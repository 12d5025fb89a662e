#include "hazardrag/web/search.hpp"

#include "hazardrag/error.hpp"
#include "hazardrag/http_json.hpp"
#include "hazardrag/text.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace hazardrag::web {
namespace {

WebSnippet snippet_from_json(const nlohmann::json& j) {
    WebSnippet s;
    s.title = j.value("title", "");
    s.url = j.value("url", "");
    s.snippet = j.value("snippet", "");
    return s;
}

// Drops results the rest of the pipeline cannot cite or use.
void keep_usable(std::vector<WebSnippet>& out, WebSnippet s, std::size_t limit) {
    if (out.size() >= limit || text::is_blank(s.url) || text::is_blank(s.snippet)) return;
    out.push_back(std::move(s));
}

}  // namespace

FixtureSearchClient FixtureSearchClient::from_json(std::string_view json_text) {
    std::vector<Entry> entries;
    try {
        const auto doc = nlohmann::json::parse(json_text);
        for (const auto& e : doc.at("entries")) {
            Entry entry;
            entry.contains = e.value("contains", std::vector<std::string>{});
            entry.fail = e.value("fail", false);
            for (const auto& r : e.value("results", nlohmann::json::array())) {
                entry.results.push_back(snippet_from_json(r));
            }
            entries.push_back(std::move(entry));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("search fixture: ") + e.what());
    }
    return FixtureSearchClient(std::move(entries));
}

FixtureSearchClient FixtureSearchClient::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

std::vector<WebSnippet> FixtureSearchClient::search(const std::string& query, std::size_t limit) {
    const auto lowered = text::to_lower(query);
    for (const auto& entry : entries_) {
        bool all = true;
        for (const auto& term : entry.contains) {
            all = all && lowered.find(text::to_lower(term)) != std::string::npos;
        }
        if (!all) continue;
        if (entry.fail) throw Error(ErrorCode::SearchFailure, "fixture search failure");
        std::vector<WebSnippet> out;
        for (const auto& s : entry.results) keep_usable(out, s, limit);
        return out;
    }
    return {};
}

std::vector<WebSnippet> HttpSearchClient::search(const std::string& query, std::size_t limit) {
    std::map<std::string, std::string> headers;
    if (!options_.api_key.empty()) headers["Authorization"] = "Bearer " + options_.api_key;
    std::vector<WebSnippet> out;
    try {
        const auto reply = http::post_json(options_.url, {{"query", query}, {"limit", limit}}, headers,
                                           options_.timeout_seconds);
        const auto& list = reply.is_object() && reply.contains("results") ? reply.at("results") : reply;
        for (const auto& r : list) keep_usable(out, snippet_from_json(r), limit);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::SearchFailure, std::string("search endpoint: ") + e.what());
    }
    return out;
}

std::vector<WebSnippet> DuckDuckGoSearchClient::search(const std::string& query, std::size_t limit) {
    std::vector<WebSnippet> out;
    try {
        const auto reply = http::get_json(
            endpoint_, {{"q", query}, {"format", "json"}, {"no_html", "1"}, {"skip_disambig", "1"}}, {},
            timeout_seconds_);
        if (!reply.value("AbstractText", "").empty()) {
            keep_usable(out, {reply.value("Heading", ""), reply.value("AbstractURL", ""),
                              reply.value("AbstractText", "")},
                        limit);
        }
        // Related topics nest one level for categories.
        std::vector<nlohmann::json> topics;
        for (const auto& t : reply.value("RelatedTopics", nlohmann::json::array())) {
            if (t.contains("Topics")) {
                for (const auto& sub : t.at("Topics")) topics.push_back(sub);
            } else {
                topics.push_back(t);
            }
        }
        for (const auto& t : topics) {
            const std::string body = t.value("Text", "");
            keep_usable(out, {body.substr(0, body.find(" - ")), t.value("FirstURL", ""), body}, limit);
        }
    } catch (const std::exception& e) {
        throw Error(ErrorCode::SearchFailure, std::string("duckduckgo: ") + e.what());
    }
    return out;
}

}  // namespace hazardrag::web
