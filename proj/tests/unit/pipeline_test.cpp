#include "hazardrag/error.hpp"
#include "hazardrag/retrieval/pipeline.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

using namespace hazardrag;
using namespace hazardrag::retrieval;

namespace {

knowledge::Corpus small_corpus() {
    const std::vector<knowledge::RawPassage> raw = {
        {"p1", "fema", "Harvey flooding damaged homes in Harris County", {}, {}},
        {"p2", "cdc", "Extreme heat raises the risk of heat stroke", {}, {}},
        {"p3", "nws", "Flood warnings were issued for Houston bayous during Harvey", {}, {}},
        {"p4", "ready", "Build an emergency kit with water and a flashlight", {}, {}},
    };
    return knowledge::ingest_passages(raw);
}

}  // namespace

TEST(Pipeline, EveryStrategyReturnsRelevantContext) {
    const auto corpus = small_corpus();
    HashingEmbedder embedder(64);
    TokenOverlapScorer scorer;
    const auto indices = build_indices(corpus, embedder);
    for (auto strategy : kAllStrategies) {
        RetrievalConfig cfg{strategy, 3, 2, 128};
        const auto out = retrieve("Harvey flood Houston", cfg, TaskKind::OpenEnded, corpus, indices, {embedder, scorer});
        EXPECT_LE(out.pool.entries.size(), 3u);
        ASSERT_EQ(out.context.units.size(), 2u) << to_label(strategy);
        std::set<std::string> pool_ids;
        for (const auto& e : out.pool.entries) pool_ids.insert(e.passage_id);
        for (const auto& r : out.reranked) EXPECT_TRUE(pool_ids.count(r.passage_id));
        EXPECT_EQ(out.context.units[0].source_id, corpus.find(out.reranked[0].passage_id)->source_id);
        EXPECT_FALSE(out.degraded);
    }
}

TEST(Pipeline, HybridDegradesToKeywordWithoutVectors) {
    const auto corpus = small_corpus();
    testkit::FailingEmbedder failing;
    TokenOverlapScorer scorer;
    const auto indices = build_indices(corpus, failing);
    EXPECT_FALSE(indices.vector.has_value());
    EXPECT_FALSE(indices.vector_error.empty());
    const auto out = retrieve("heat stroke", RetrievalConfig{RetrievalStrategy::Hybrid, 3, 1, 8}, TaskKind::Mcq,
                              corpus, indices, {failing, scorer});
    EXPECT_TRUE(out.degraded);
    ASSERT_EQ(out.context.units.size(), 1u);
    EXPECT_EQ(out.context.units[0].source_id, "cdc");
}

TEST(Pipeline, InvalidConfigIsRejected) {
    const auto corpus = small_corpus();
    HashingEmbedder embedder(16);
    TokenOverlapScorer scorer;
    const auto indices = build_indices(corpus, embedder);
    for (const auto& cfg : {RetrievalConfig{RetrievalStrategy::Keyword, 0, 1, 1},
                            RetrievalConfig{RetrievalStrategy::Keyword, 3, 5, 1},
                            RetrievalConfig{RetrievalStrategy::Keyword, 3, 1, 0}}) {
        try {
            retrieve("flood", cfg, TaskKind::Mcq, corpus, indices, {embedder, scorer});
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
        }
    }
}

TEST(Pipeline, EmptyCorpusCannotBeIndexed) {
    HashingEmbedder embedder(16);
    try {
        build_indices(knowledge::Corpus{}, embedder);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyCorpus);
    }
}

TEST(Snapshot, RoundTripAndCorpusCheck) {
    const auto corpus = small_corpus();
    HashingEmbedder embedder(16);
    const auto indices = build_indices(corpus, embedder);
    std::stringstream buf;
    save_snapshot(buf, indices);
    const auto back = load_snapshot(buf);
    EXPECT_EQ(back.keyword, indices.keyword);
    EXPECT_EQ(back.vector, indices.vector);
    EXPECT_NO_THROW(check_snapshot_matches(back, corpus));

    const std::vector<knowledge::RawPassage> other = {{"p1", "", "different text", {}, {}}};
    try {
        check_snapshot_matches(back, knowledge::ingest_passages(other));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidSnapshot);
    }
    std::stringstream junk("{\"version\": 99}");
    EXPECT_THROW(load_snapshot(junk), Error);
}
