#pragma once

#include "hazardrag/llm/prompt_kind.hpp"

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hazardrag::llm {

struct GenerationRequest {
    std::string prompt;
    double temperature = 0.0;
    int max_output_tokens = 100;

    friend bool operator==(const GenerationRequest&, const GenerationRequest&) = default;
};

/// Text generation seam. Implementations throw Error(ClientFailure) when the
/// backend cannot produce an answer.
class GenerativeModelClient {
public:
    virtual ~GenerativeModelClient() = default;
    virtual std::string generate(const GenerationRequest& request) = 0;
};

/// Key used by fixture files: FNV-1a 64 of the prompt, 16 hex digits.
std::string prompt_hash(std::string_view prompt);

/// Replays recorded responses. An entry matches either by exact prompt hash
/// or by (optional) prompt kind plus a list of case-insensitive substrings;
/// hash entries win, then rule entries in file order. Unmatched prompts and
/// entries marked "fail" raise ClientFailure.
class FixtureReplayClient : public GenerativeModelClient {
public:
    struct Entry {
        std::optional<std::string> prompt_hash;
        std::optional<PromptKind> kind;
        std::vector<std::string> contains;
        std::string response;
        bool fail = false;
    };

    FixtureReplayClient() = default;
    explicit FixtureReplayClient(std::vector<Entry> entries) : entries_(std::move(entries)) {}

    static FixtureReplayClient from_json(std::string_view json_text);
    static FixtureReplayClient from_file(const std::filesystem::path& path);

    void add(Entry entry) { entries_.push_back(std::move(entry)); }
    std::string generate(const GenerationRequest& request) override;

private:
    std::vector<Entry> entries_;
};

/// Decorator that logs every request (and its prompt kind) before delegating.
class RecordingClient : public GenerativeModelClient {
public:
    struct Call {
        GenerationRequest request;
        std::optional<PromptKind> kind;
    };

    explicit RecordingClient(std::shared_ptr<GenerativeModelClient> inner)
        : inner_(std::move(inner)) {}

    std::string generate(const GenerationRequest& request) override;

    std::vector<Call> calls() const;
    std::vector<PromptKind> kinds() const;
    void clear();

private:
    std::shared_ptr<GenerativeModelClient> inner_;
    mutable std::mutex mutex_;
    std::vector<Call> calls_;
};

/// Client that fails every call; exercises degradation paths.
class FailingClient : public GenerativeModelClient {
public:
    std::string generate(const GenerationRequest& request) override;
};

/// OpenAI-compatible chat-completions endpoint.
class HttpChatClient : public GenerativeModelClient {
public:
    struct Options {
        std::string base_url;  // e.g. https://api.openai.com
        std::string path = "/v1/chat/completions";
        std::string model;
        std::string api_key;
        int timeout_seconds = 60;
    };

    explicit HttpChatClient(Options options) : options_(std::move(options)) {}
    std::string generate(const GenerationRequest& request) override;

private:
    Options options_;
};

}  // namespace hazardrag::llm
