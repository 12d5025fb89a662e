#include "hazardrag/llm/heuristic_client.hpp"
#include "hazardrag/service/engine.hpp"

#include <spdlog/spdlog.h>

namespace hazardrag::service {

namespace {

std::shared_ptr<llm::GenerativeModelClient> make_model(const ClientConfig& c) {
    if (c.kind == "fixture") {
        return std::make_shared<llm::FixtureReplayClient>(llm::FixtureReplayClient::from_file(*c.fixture));
    }
    if (c.kind == "http") {
        llm::HttpChatClient::Options o;
        o.base_url = c.url;
        o.model = c.model;
        o.api_key = c.api_key();
        o.timeout_seconds = c.timeout_seconds;
        return std::make_shared<llm::HttpChatClient>(std::move(o));
    }
    return std::make_shared<llm::HeuristicModelClient>();
}

std::shared_ptr<retrieval::EmbeddingClient> make_embedder(const ClientConfig& c) {
    if (c.kind == "http") {
        return std::make_shared<retrieval::HttpEmbeddingClient>(retrieval::HttpEmbeddingClient::Options{
            c.url, c.model, c.api_key(), c.dimension, c.timeout_seconds});
    }
    return std::make_shared<retrieval::HashingEmbedder>(c.dimension);
}

std::shared_ptr<retrieval::RerankScorer> make_scorer(const ClientConfig& c) {
    if (c.kind == "http") {
        return std::make_shared<retrieval::HttpRerankScorer>(
            retrieval::HttpRerankScorer::Options{c.url, c.api_key(), c.timeout_seconds});
    }
    return std::make_shared<retrieval::TokenOverlapScorer>();
}

std::shared_ptr<web::SearchClient> make_search(const ClientConfig& c) {
    if (c.kind == "fixture") {
        return std::make_shared<web::FixtureSearchClient>(web::FixtureSearchClient::from_file(*c.fixture));
    }
    if (c.kind == "http") {
        return std::make_shared<web::HttpSearchClient>(
            web::HttpSearchClient::Options{c.url, c.api_key(), c.timeout_seconds});
    }
    if (c.kind == "duckduckgo") {
        return c.url.empty() ? std::make_shared<web::DuckDuckGoSearchClient>()
                             : std::make_shared<web::DuckDuckGoSearchClient>(c.url, c.timeout_seconds);
    }
    return nullptr;
}

}  // namespace

LoadedComponents load_components(const ServiceConfig& config) {
    LoadedComponents loaded;
    auto& comp = loaded.components;
    comp.model = make_model(config.model);
    comp.embedder = make_embedder(config.embedder);
    comp.scorer = make_scorer(config.reranker);
    comp.search = make_search(config.search);

    if (config.corpus) {
        auto corpus = std::make_shared<knowledge::Corpus>(knowledge::load_corpus(*config.corpus));
        std::shared_ptr<retrieval::Indices> indices;
        if (config.snapshot && std::filesystem::exists(*config.snapshot)) {
            auto snap = std::make_shared<retrieval::Indices>(retrieval::load_snapshot(*config.snapshot));
            try {
                retrieval::check_snapshot_matches(*snap, *corpus);
                indices = std::move(snap);
            } catch (const Error& e) {
                spdlog::warn("snapshot {} is stale ({}); rebuilding in memory", config.snapshot->string(), e.what());
            }
        }
        if (!indices) {
            indices = std::make_shared<retrieval::Indices>(retrieval::build_indices(*corpus, *comp.embedder));
        }
        if (!indices->vector_error.empty()) spdlog::warn("vector index unavailable: {}", indices->vector_error);
        comp.corpus = std::move(corpus);
        comp.indices = std::move(indices);
    }
    if (config.store_schema) {
        comp.store = std::make_shared<knowledge::StructuredStore>(
            knowledge::load_structured_store_files(*config.store_schema));
    } else if (config.store_db) {
        comp.store = std::make_shared<knowledge::StructuredStore>(
            knowledge::load_structured_store_sqlite(*config.store_db, config.join_keys));
    }

    auto& opt = loaded.options;
    opt.retrieval = config.retrieval;
    opt.memory_window = config.memory_window;
    if (config.template_dir) opt.templates = response::load_templates(*config.template_dir);
    opt.web.limit = config.web_limit;
    if (config.gazetteer) opt.web.gazetteer = web::load_gazetteer(*config.gazetteer);
    if (config.knowledge_scope) opt.understanding.knowledge_scope = *config.knowledge_scope;
    opt.session_dir = config.session_dir;
    return loaded;
}

std::unique_ptr<Engine> make_engine(const ServiceConfig& config) {
    auto loaded = load_components(config);
    return std::make_unique<Engine>(std::move(loaded.components), std::move(loaded.options));
}

}  // namespace hazardrag::service
