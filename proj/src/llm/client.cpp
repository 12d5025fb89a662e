#include "hazardrag/llm/client.hpp"

#include "hazardrag/error.hpp"
#include "hazardrag/http_json.hpp"
#include "hazardrag/text.hpp"

#include <fstream>
#include <sstream>

namespace hazardrag::llm {

using nlohmann::json;

namespace {

struct KindMarker {
    PromptKind kind;
    std::string_view marker;
    std::string_view label;
};

constexpr KindMarker kMarkers[] = {
    {PromptKind::Rewrite, kRewriteTask, "rewrite"},
    {PromptKind::Classify, kClassifyTask, "classify"},
    {PromptKind::EntityTags, kEntityTask, "entity_tags"},
    {PromptKind::TextToSql, kSqlTask, "text_to_sql"},
    {PromptKind::Answer, kAnswerTask, "answer"},
    {PromptKind::McqAnswer, kMcqTask, "mcq_answer"},
    {PromptKind::OpenAnswer, kOpenTask, "open_answer"},
    {PromptKind::KeypointJudge, kJudgeTask, "keypoint_judge"},
};

}  // namespace

std::optional<PromptKind> detect_prompt_kind(std::string_view prompt) noexcept {
    for (const auto& m : kMarkers) {
        if (prompt.substr(0, m.marker.size()) == m.marker) return m.kind;
    }
    return std::nullopt;
}

std::string_view to_label(PromptKind kind) noexcept {
    for (const auto& m : kMarkers) {
        if (m.kind == kind) return m.label;
    }
    return "unknown";
}

std::optional<PromptKind> parse_prompt_kind(std::string_view label) noexcept {
    for (const auto& m : kMarkers) {
        if (m.label == label) return m.kind;
    }
    return std::nullopt;
}

std::string prompt_hash(std::string_view prompt) {
    return text::hex64(text::fnv1a64(prompt));
}

FixtureReplayClient FixtureReplayClient::from_json(std::string_view json_text) {
    FixtureReplayClient client;
    try {
        const auto doc = json::parse(json_text);
        for (const auto& e : doc.at("entries")) {
            Entry entry;
            if (e.contains("prompt_hash")) entry.prompt_hash = e["prompt_hash"].get<std::string>();
            if (e.contains("kind")) {
                const auto label = e["kind"].get<std::string>();
                entry.kind = parse_prompt_kind(label);
                if (!entry.kind) throw Error(ErrorCode::InvalidConfig, "unknown prompt kind " + label);
            }
            if (e.contains("contains")) entry.contains = e["contains"].get<std::vector<std::string>>();
            entry.response = e.value("response", std::string{});
            entry.fail = e.value("fail", false);
            client.entries_.push_back(std::move(entry));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("fixture file: ") + e.what());
    }
    return client;
}

FixtureReplayClient FixtureReplayClient::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open fixture file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json(buffer.str());
}

std::string FixtureReplayClient::generate(const GenerationRequest& request) {
    const auto hash = prompt_hash(request.prompt);
    const Entry* hit = nullptr;
    for (const auto& e : entries_) {
        if (e.prompt_hash && *e.prompt_hash == hash) {
            hit = &e;
            break;
        }
    }
    if (hit == nullptr) {
        const auto kind = detect_prompt_kind(request.prompt);
        const auto lowered = text::to_lower(request.prompt);
        for (const auto& e : entries_) {
            if (e.prompt_hash) continue;
            if (e.kind && e.kind != kind) continue;
            bool all = true;
            for (const auto& needle : e.contains) {
                all = all && lowered.find(text::to_lower(needle)) != std::string::npos;
            }
            if (all) {
                hit = &e;
                break;
            }
        }
    }
    if (hit == nullptr) throw Error(ErrorCode::ClientFailure, "no fixture for prompt " + hash);
    if (hit->fail) throw Error(ErrorCode::ClientFailure, "fixture failure for prompt " + hash);
    return hit->response;
}

std::string RecordingClient::generate(const GenerationRequest& request) {
    {
        std::lock_guard lock(mutex_);
        calls_.push_back({request, detect_prompt_kind(request.prompt)});
    }
    return inner_->generate(request);
}

std::vector<RecordingClient::Call> RecordingClient::calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

std::vector<PromptKind> RecordingClient::kinds() const {
    std::lock_guard lock(mutex_);
    std::vector<PromptKind> out;
    for (const auto& c : calls_) {
        if (c.kind) out.push_back(*c.kind);
    }
    return out;
}

void RecordingClient::clear() {
    std::lock_guard lock(mutex_);
    calls_.clear();
}

std::string FailingClient::generate(const GenerationRequest&) {
    throw Error(ErrorCode::ClientFailure, "model backend unavailable");
}

std::string HttpChatClient::generate(const GenerationRequest& request) {
    json body = {
        {"model", options_.model},
        {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
        {"temperature", request.temperature},
        {"max_tokens", request.max_output_tokens},
    };
    std::map<std::string, std::string> headers;
    if (!options_.api_key.empty()) headers["Authorization"] = "Bearer " + options_.api_key;
    try {
        const auto reply = http::post_json(options_.base_url + options_.path, body, headers,
                                           options_.timeout_seconds);
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ClientFailure, e.what());
    }
}

}  // namespace hazardrag::llm
