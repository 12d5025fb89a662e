#include "hazardrag/service/engine.hpp"

#include "hazardrag/llm/heuristic_client.hpp"
#include "hazardrag/query/router.hpp"
#include "hazardrag/sql/text_to_sql.hpp"
#include "hazardrag/text.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdio>
#include <fstream>

namespace hazardrag::service {

using nlohmann::json;

json QueryResponse::to_json() const {
    json j;
    j["answer_text"] = answer_text;
    j["pathway"] = to_label(pathway);
    j["evidence_pathway"] = to_label(evidence_pathway);
    j["sources"] = sources;
    j["degraded"] = degraded;
    j["rewritten_query"] = rewritten_query;
    j["query_type"] = to_label(query_type);
    j["is_ambiguous"] = is_ambiguous;
    j["is_domain_relevant"] = is_domain_relevant;
    j["entity_tags"] = {{"disaster_types", entity_tags.disaster_types}, {"locations", entity_tags.locations}};
    j["route_reason"] = route_reason;
    j["sql"] = sql ? json(*sql) : json(nullptr);
    j["redirect_reason"] = redirect_reason ? json(*redirect_reason) : json(nullptr);
    j["trace_id"] = trace_id;
    return j;
}

json to_json(const memory::MemoryEntry& entry) {
    return json::parse(memory::entry_to_json_line(entry));
}

Engine::Engine(EngineComponents components, EngineOptions options)
    : components_(std::move(components)), options_(std::move(options)), id_rng_(std::random_device{}()) {
    if (!components_.model) throw Error(ErrorCode::InvalidConfig, "engine needs a generative model client");
    if (components_.indices && (!components_.embedder || !components_.scorer)) {
        throw Error(ErrorCode::InvalidConfig, "document retrieval needs an embedder and a rerank scorer");
    }
    retrieval::validate(options_.retrieval);
    if (options_.session_dir) load_sessions();
}

std::string Engine::create_session() {
    std::string id;
    {
        std::lock_guard lock(id_mutex_);
        do {
            id = "s-" + text::hex64(id_rng_());
        } while (has_session(id));
    }
    std::unique_lock lock(sessions_mutex_);
    sessions_.emplace(id, std::make_unique<Session>(options_.memory_window));
    return id;
}

bool Engine::has_session(const std::string& id) const {
    return find(id) != nullptr;
}

Engine::Session* Engine::find(const std::string& id) const {
    std::shared_lock lock(sessions_mutex_);
    const auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second.get();
}

Engine::Session& Engine::get_or_create(const std::string& id, bool auto_create) {
    if (auto* s = find(id)) return *s;
    if (!auto_create) throw Error(ErrorCode::UnknownSession, "unknown session " + id);
    if (text::is_blank(id)) throw Error(ErrorCode::EmptyInput, "session id is empty");
    std::unique_lock lock(sessions_mutex_);
    auto& slot = sessions_[id];
    if (!slot) slot = std::make_unique<Session>(options_.memory_window);
    return *slot;
}

std::string Engine::next_trace_id() {
    char buf[32];
    std::snprintf(buf, sizeof buf, "t-%06llu", static_cast<unsigned long long>(++trace_counter_));
    return buf;
}

std::vector<memory::MemoryEntry> Engine::history(const std::string& session_id) const {
    const auto* s = find(session_id);
    if (!s) throw Error(ErrorCode::UnknownSession, "unknown session " + session_id);
    std::lock_guard lock(s->mutex);
    return {s->memory.window().begin(), s->memory.window().end()};
}

QueryResponse Engine::handle_query(const std::string& session_id, const std::string& text, bool auto_create) {
    Session& session = get_or_create(session_id, auto_create);
    const std::string trace = next_trace_id();
    std::lock_guard lock(session.mutex);
    try {
        auto response = run_turn(session, text, trace);
        persist(session_id, session);
        spdlog::info("{} session={} pathway={} evidence={} degraded={}", trace, session_id,
                     to_label(response.pathway), to_label(response.evidence_pathway), response.degraded);
        return response;
    } catch (const Error& e) {
        spdlog::warn("{} session={} failed: {} ({})", trace, session_id, e.what(), to_string(e.code()));
        throw TurnError(e, trace);
    }
}

QueryResponse Engine::run_turn(Session& session, const std::string& text, const std::string& trace) {
    auto& model = *components_.model;
    const auto sqr = query::understand(text, session.memory, model, options_.understanding);
    const auto decision = query::route(sqr);

    QueryResponse out;
    out.trace_id = trace;
    out.pathway = decision.pathway;
    out.route_reason = decision.reason;
    out.rewritten_query = sqr.rewritten_query;
    out.query_type = sqr.query_type;
    out.is_ambiguous = sqr.is_ambiguous;
    out.is_domain_relevant = sqr.is_domain_relevant;
    out.entity_tags = sqr.entity_tags;

    auto web_context = [&] {
        if (!components_.search) {
            GroundingContext empty;
            empty.branch = Pathway::WebFallback;
            empty.degraded = true;
            return empty;
        }
        return web::fallback_flow(sqr, *components_.search, options_.web);
    };

    GroundingContext ctx;
    switch (decision.pathway) {
        case Pathway::DocumentRetrieval: {
            if (!indices_loaded()) throw Error(ErrorCode::NotReady, "document indices are not loaded");
            auto outcome = retrieval::retrieve(sqr.rewritten_query, options_.retrieval, TaskKind::Interactive,
                                               *components_.corpus, *components_.indices,
                                               {*components_.embedder, *components_.scorer});
            ctx = std::move(outcome.context);
            ctx.degraded = ctx.degraded || outcome.degraded;
            break;
        }
        case Pathway::StructuredAccess: {
            if (!components_.store) {
                out.redirect_reason = "StoreUnavailable";
                ctx = web_context();
                break;
            }
            auto flow = sql::structured_answer_flow(sqr, *components_.store, model);
            if (auto* evidence = std::get_if<sql::StructuredEvidence>(&flow)) {
                ctx = std::move(evidence->context);
                out.sql = evidence->validated.statement;
            } else {
                const auto& redirect = std::get<sql::FallbackRedirect>(flow);
                out.redirect_reason = redirect.reason;
                out.sql = redirect.normalized_sql;
                spdlog::info("{} structured redirect: {} {}", trace, redirect.reason, redirect.detail);
                ctx = web_context();
            }
            break;
        }
        case Pathway::WebFallback:
            ctx = web_context();
            break;
    }

    const auto pairs = session.memory.retrieve(sqr.entity_tags, options_.understanding.rewrite_turns);
    auto envelope = response::respond(ctx, pairs, sqr.rewritten_query, model, TaskKind::Interactive, std::nullopt,
                                      options_.templates);
    out.answer_text = std::move(envelope.answer_text);
    out.evidence_pathway = ctx.branch;
    out.sources = std::move(envelope.sources);
    out.degraded = envelope.degraded || sqr.degraded;

    const auto now = std::chrono::time_point_cast<std::chrono::microseconds>(std::chrono::system_clock::now());
    session.memory.store({text, out.answer_text, sqr.entity_tags, session.memory.next_timestamp(now)});
    return out;
}

void Engine::persist(const std::string& id, const Session& session) const {
    if (!options_.session_dir) return;
    const auto path = *options_.session_dir / (id + ".jsonl");
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp);
        session.memory.save_jsonl(out);
    }
    std::filesystem::rename(tmp, path);
}

void Engine::load_sessions() {
    std::filesystem::create_directories(*options_.session_dir);
    for (const auto& entry : std::filesystem::directory_iterator(*options_.session_dir)) {
        if (entry.path().extension() != ".jsonl") continue;
        std::ifstream in(entry.path());
        auto s = std::make_unique<Session>(options_.memory_window);
        s->memory = memory::SessionMemory::load_jsonl(in, options_.memory_window);
        sessions_.emplace(entry.path().stem().string(), std::move(s));
    }
}

json Engine::health() const {
    json j;
    j["status"] = "ok";
    j["version"] = "0.1.0";
    j["indices_loaded"] = indices_loaded();
    j["passages"] = components_.corpus ? components_.corpus->count() : 0;
    j["vector_index"] = components_.indices && components_.indices->vector.has_value();
    j["store_loaded"] = components_.store != nullptr;
    j["store_rows"] = components_.store ? components_.store->total_rows() : 0;
    j["search_configured"] = components_.search != nullptr;
    {
        std::shared_lock lock(sessions_mutex_);
        j["sessions"] = sessions_.size();
    }
    return j;
}

}  // namespace hazardrag::service
