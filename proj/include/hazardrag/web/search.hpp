#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hazardrag::web {

struct WebSnippet {
    std::string title;
    std::string url;
    std::string snippet;

    friend bool operator==(const WebSnippet&, const WebSnippet&) = default;
};

/// External search seam. Implementations throw Error(SearchFailure).
class SearchClient {
public:
    virtual ~SearchClient() = default;
    virtual std::vector<WebSnippet> search(const std::string& query, std::size_t limit) = 0;
};

/// Replays canned results. The first entry whose `contains` terms all occur
/// in the query (case-insensitive) answers; an entry with no terms matches
/// anything. No match yields an empty list.
///
/// File format: {"entries": [{"contains": [...], "fail": false,
///                           "results": [{"title", "url", "snippet"}]}]}
class FixtureSearchClient : public SearchClient {
public:
    struct Entry {
        std::vector<std::string> contains;
        std::vector<WebSnippet> results;
        bool fail = false;
    };

    FixtureSearchClient() = default;
    explicit FixtureSearchClient(std::vector<Entry> entries) : entries_(std::move(entries)) {}

    static FixtureSearchClient from_json(std::string_view json_text);
    static FixtureSearchClient from_file(const std::filesystem::path& path);

    std::vector<WebSnippet> search(const std::string& query, std::size_t limit) override;

private:
    std::vector<Entry> entries_;
};

/// Generic JSON search endpoint: POST {"query", "limit"} answered by
/// [{"title", "url", "snippet"}].
class HttpSearchClient : public SearchClient {
public:
    struct Options {
        std::string url;
        std::string api_key;  // sent as a bearer token when set
        int timeout_seconds = 20;
    };

    explicit HttpSearchClient(Options options) : options_(std::move(options)) {}
    std::vector<WebSnippet> search(const std::string& query, std::size_t limit) override;

private:
    Options options_;
};

/// DuckDuckGo instant-answer API (abstract plus related topics).
class DuckDuckGoSearchClient : public SearchClient {
public:
    explicit DuckDuckGoSearchClient(std::string endpoint = "https://api.duckduckgo.com/",
                                    int timeout_seconds = 20)
        : endpoint_(std::move(endpoint)), timeout_seconds_(timeout_seconds) {}

    std::vector<WebSnippet> search(const std::string& query, std::size_t limit) override;

private:
    std::string endpoint_;
    int timeout_seconds_;
};

}  // namespace hazardrag::web
