#pragma once

#include "hazardrag/knowledge/corpus.hpp"
#include "hazardrag/retrieval/bm25.hpp"
#include "hazardrag/retrieval/embedding.hpp"
#include "hazardrag/retrieval/rerank.hpp"
#include "hazardrag/retrieval/types.hpp"
#include "hazardrag/retrieval/vector_index.hpp"
#include "hazardrag/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace hazardrag::retrieval {

struct Indices {
    InvertedIndex keyword;
    std::optional<VectorIndex> vector;
    std::string vector_error;  // set when the embedder failed during build
};

/// Error(EmptyCorpus) for an empty corpus. An embedder failure leaves
/// `vector` empty and records the message; keyword search still works.
Indices build_indices(const knowledge::Corpus& corpus, EmbeddingClient& embedder);

struct RetrievalClients {
    EmbeddingClient& embedder;
    RerankScorer& scorer;
};

struct RetrievalOutcome {
    GroundingContext context;
    CandidatePool pool;
    std::vector<ScoredPassage> reranked;
    bool degraded = false;
};

/// strategy search at pool depth -> (merge) -> candidate pool -> rerank ->
/// context assembly. Under Hybrid each channel is fetched to pool depth and
/// the merged list is truncated to it; a failed vector channel degrades
/// Hybrid to keyword-only.
RetrievalOutcome retrieve(std::string_view query, const RetrievalConfig& config, TaskKind task,
                          const knowledge::Corpus& corpus, const Indices& indices,
                          RetrievalClients clients);

inline constexpr int kSnapshotVersion = 1;

void save_snapshot(std::ostream& out, const Indices& indices);
void save_snapshot(const std::filesystem::path& path, const Indices& indices);
Indices load_snapshot(std::istream& in);
Indices load_snapshot(const std::filesystem::path& path);

/// Error(InvalidSnapshot) unless the snapshot indexes exactly this corpus.
void check_snapshot_matches(const Indices& indices, const knowledge::Corpus& corpus);

}  // namespace hazardrag::retrieval
