#include "hazardrag/retrieval/pipeline.hpp"

#include "hazardrag/error.hpp"
#include "hazardrag/retrieval/context.hpp"
#include "hazardrag/retrieval/fusion.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <future>
#include <istream>
#include <ostream>

namespace hazardrag::retrieval {

using nlohmann::json;

Indices build_indices(const knowledge::Corpus& corpus, EmbeddingClient& embedder) {
    if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "cannot index an empty corpus");
    Indices indices{InvertedIndex::build(corpus), std::nullopt, {}};
    try {
        indices.vector = VectorIndex::build(corpus, embedder);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::EmbedderFailure) throw;
        indices.vector_error = e.what();
    }
    return indices;
}

namespace {

std::vector<ScoredPassage> vector_channel(std::string_view query, std::size_t n,
                                          const Indices& indices, EmbeddingClient& embedder) {
    if (!indices.vector) {
        throw Error(ErrorCode::EmbedderFailure, "vector index unavailable: " + indices.vector_error);
    }
    return vector_search(query, n, *indices.vector, embedder);
}

}  // namespace

RetrievalOutcome retrieve(std::string_view query, const RetrievalConfig& config, TaskKind task,
                          const knowledge::Corpus& corpus, const Indices& indices,
                          RetrievalClients clients) {
    validate(config);
    RetrievalOutcome outcome;
    std::vector<ScoredPassage> results;

    switch (config.strategy) {
        case RetrievalStrategy::Keyword:
            results = keyword_search(query, config.pool_size, indices.keyword);
            break;
        case RetrievalStrategy::Vector:
            results = vector_channel(query, config.pool_size, indices, clients.embedder);
            break;
        case RetrievalStrategy::Hybrid: {
            auto vec_future = std::async(std::launch::async, [&] {
                return vector_channel(query, config.pool_size, indices, clients.embedder);
            });
            const auto kw = keyword_search(query, config.pool_size, indices.keyword);
            std::vector<ScoredPassage> vec;
            try {
                vec = vec_future.get();
            } catch (const Error& e) {
                if (e.code() != ErrorCode::EmbedderFailure) throw;
                outcome.degraded = true;
            }
            results = hybrid_merge(kw, vec);
            break;
        }
    }

    outcome.pool = build_candidate_pool(results, config.pool_size);
    auto reranked = rerank(query, outcome.pool, config.rerank_k, clients.scorer,
                           config.rerank_batch, corpus);
    outcome.degraded = outcome.degraded || reranked.degraded;
    outcome.reranked = std::move(reranked.passages);

    std::vector<knowledge::Passage> passages;
    passages.reserve(outcome.reranked.size());
    for (const auto& r : outcome.reranked) passages.push_back(*corpus.find(r.passage_id));
    outcome.context = assemble_context(passages, task);
    outcome.context.degraded = outcome.degraded || outcome.context.empty();
    return outcome;
}

void save_snapshot(std::ostream& out, const Indices& indices) {
    json doc = {
        {"format", "hazardrag-index"},
        {"version", kSnapshotVersion},
        {"keyword", indices.keyword.to_json()},
        {"vector", indices.vector ? indices.vector->to_json() : json(nullptr)},
    };
    out << doc.dump() << '\n';
}

void save_snapshot(const std::filesystem::path& path, const Indices& indices) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write snapshot " + path.string());
    save_snapshot(out, indices);
}

Indices load_snapshot(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::InvalidSnapshot, e.what());
    }
    if (doc.value("format", std::string{}) != "hazardrag-index") {
        throw Error(ErrorCode::InvalidSnapshot, "not an index snapshot");
    }
    if (doc.value("version", 0) != kSnapshotVersion) {
        throw Error(ErrorCode::InvalidSnapshot, "unsupported snapshot version");
    }
    Indices indices{InvertedIndex::from_json(doc.at("keyword")), std::nullopt, {}};
    if (!doc["vector"].is_null()) {
        indices.vector = VectorIndex::from_json(doc["vector"]);
    } else {
        indices.vector_error = "snapshot has no vector index";
    }
    return indices;
}

Indices load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open snapshot " + path.string());
    return load_snapshot(in);
}

void check_snapshot_matches(const Indices& indices, const knowledge::Corpus& corpus) {
    std::vector<std::string> ids;
    for (const auto& p : corpus.passages()) ids.push_back(p.id);
    if (indices.keyword.doc_ids() != ids) {
        throw Error(ErrorCode::InvalidSnapshot, "keyword index does not match the corpus");
    }
    if (indices.vector && indices.vector->doc_ids() != ids) {
        throw Error(ErrorCode::InvalidSnapshot, "vector index does not match the corpus");
    }
}

}  // namespace hazardrag::retrieval
