#pragma once

#include "hazardrag/error.hpp"
#include "hazardrag/knowledge/corpus.hpp"
#include "hazardrag/knowledge/structured_store.hpp"
#include "hazardrag/llm/client.hpp"
#include "hazardrag/memory/memory_bank.hpp"
#include "hazardrag/query/understanding.hpp"
#include "hazardrag/response/generator.hpp"
#include "hazardrag/retrieval/pipeline.hpp"
#include "hazardrag/service/config.hpp"
#include "hazardrag/web/fallback.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

namespace hazardrag::service {

struct EngineComponents {
    std::shared_ptr<const knowledge::Corpus> corpus;          // null: document branch unavailable
    std::shared_ptr<const retrieval::Indices> indices;        // null: indices not loaded
    std::shared_ptr<const knowledge::StructuredStore> store;  // null: structured requests redirect
    std::shared_ptr<llm::GenerativeModelClient> model;
    std::shared_ptr<retrieval::EmbeddingClient> embedder;
    std::shared_ptr<retrieval::RerankScorer> scorer;
    std::shared_ptr<web::SearchClient> search;                // null: web branch yields no evidence
};

struct EngineOptions {
    retrieval::RetrievalConfig retrieval;
    std::size_t memory_window = memory::kDefaultWindow;
    response::TemplateSet templates = response::default_templates();
    web::FallbackOptions web;
    query::UnderstandingOptions understanding;
    std::optional<std::filesystem::path> session_dir;  // JSONL per session when set
};

struct QueryResponse {
    std::string answer_text;
    Pathway pathway = Pathway::DocumentRetrieval;  // the router's decision
    Pathway evidence_pathway = Pathway::DocumentRetrieval;  // differs after a redirect
    std::vector<std::string> sources;
    bool degraded = false;
    std::string rewritten_query;
    QueryType query_type = QueryType::Other;
    bool is_ambiguous = false;
    bool is_domain_relevant = true;
    EntityTags entity_tags;
    std::string route_reason;
    std::optional<std::string> sql;
    std::optional<std::string> redirect_reason;
    std::string trace_id;

    nlohmann::json to_json() const;
};

/// A turn that failed after a trace id was assigned. Memory is untouched.
class TurnError : public Error {
public:
    TurnError(const Error& cause, std::string trace_id)
        : Error(cause.code(), cause.what()), trace_id_(std::move(trace_id)) {}
    const std::string& trace_id() const noexcept { return trace_id_; }

private:
    std::string trace_id_;
};

/// End-to-end orchestration: understand -> route -> branch -> respond ->
/// memory. Turns on different sessions run concurrently; turns on one
/// session are serialized.
class Engine {
public:
    Engine(EngineComponents components, EngineOptions options);

    std::string create_session();
    bool has_session(const std::string& id) const;

    /// Unknown ids are created on the fly when `auto_create` is set, else
    /// Error(UnknownSession). Failures surface as TurnError.
    QueryResponse handle_query(const std::string& session_id, const std::string& text, bool auto_create = true);

    /// Oldest first. Error(UnknownSession).
    std::vector<memory::MemoryEntry> history(const std::string& session_id) const;

    bool indices_loaded() const noexcept { return components_.indices && components_.corpus; }
    nlohmann::json health() const;

private:
    struct Session {
        explicit Session(std::size_t window) : memory(window) {}
        mutable std::mutex mutex;
        memory::SessionMemory memory;
    };

    Session* find(const std::string& id) const;
    Session& get_or_create(const std::string& id, bool auto_create);
    std::string next_trace_id();
    QueryResponse run_turn(Session& session, const std::string& text, const std::string& trace);
    void persist(const std::string& id, const Session& session) const;
    void load_sessions();

    EngineComponents components_;
    EngineOptions options_;

    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::unique_ptr<Session>> sessions_;
    std::mutex id_mutex_;
    std::mt19937_64 id_rng_;
    std::atomic<std::uint64_t> trace_counter_{0};
};

nlohmann::json to_json(const memory::MemoryEntry& entry);

/// Builds every component named by the configuration: corpus and indices
/// (from the snapshot when present and current, else built), store, clients,
/// templates, gazetteer.
std::unique_ptr<Engine> make_engine(const ServiceConfig& config);

struct LoadedComponents {
    EngineComponents components;
    EngineOptions options;
};
LoadedComponents load_components(const ServiceConfig& config);

}  // namespace hazardrag::service
