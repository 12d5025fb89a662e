#include "hazardrag/error.hpp"
#include "hazardrag/llm/heuristic_client.hpp"
#include "hazardrag/query/router.hpp"
#include "hazardrag/service/config.hpp"
#include "hazardrag/service/engine.hpp"
#include "hazardrag/text.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <thread>

using namespace hazardrag;
using namespace hazardrag::service;
using llm::PromptKind;

namespace {

std::shared_ptr<const knowledge::StructuredStore> shared_store() {
    return std::make_shared<const knowledge::StructuredStore>(testkit::evacuation_store());
}

std::shared_ptr<const knowledge::Corpus> demo_corpus() {
    const std::vector<knowledge::RawPassage> raw = {
        {"p1", "ready-gov", "An emergency kit holds water, food, a flashlight and medications.", {}, {}},
        {"p2", "nws", "Storm surge is seawater pushed ashore by hurricane winds.", {}, {}},
        {"p3", "fema", "Harvey flooding damaged homes across Houston and Harris County.", {}, {}},
    };
    return std::make_shared<const knowledge::Corpus>(knowledge::ingest_passages(raw));
}

std::unique_ptr<Engine> full_engine(std::shared_ptr<llm::GenerativeModelClient> model,
                                    EngineOptions options = {}) {
    EngineComponents c;
    c.corpus = demo_corpus();
    c.embedder = std::make_shared<retrieval::HashingEmbedder>(64);
    c.scorer = std::make_shared<retrieval::TokenOverlapScorer>();
    c.indices = std::make_shared<const retrieval::Indices>(retrieval::build_indices(*c.corpus, *c.embedder));
    c.store = shared_store();
    c.search = testkit::flood_search();
    c.model = std::move(model);
    return std::make_unique<Engine>(std::move(c), std::move(options));
}

}  // namespace

TEST(Engine, EvacuationScenarioIsStructured) {
    auto model = testkit::evacuation_model();
    llm::RecordingClient* rec = nullptr;
    auto recording = std::make_shared<llm::RecordingClient>(model);
    rec = recording.get();
    auto engine = testkit::scenario_engine(recording, shared_store(), nullptr);
    const auto id = engine->create_session();
    const auto r = engine->handle_query(id, testkit::kEvacuationQuery);
    EXPECT_EQ(r.pathway, Pathway::StructuredAccess);
    EXPECT_EQ(r.evidence_pathway, Pathway::StructuredAccess);
    EXPECT_EQ(r.query_type, QueryType::Quantitative);
    EXPECT_EQ(r.rewritten_query, testkit::kEvacuationQuery);
    ASSERT_TRUE(r.sql);
    EXPECT_EQ(*r.sql,
              "SELECT zip_code, MAX(evacuation_rate) FROM harvey_evacuation_data GROUP BY zip_code ORDER BY "
              "MAX(evacuation_rate) DESC");
    EXPECT_FALSE(r.redirect_reason);
    EXPECT_NE(r.answer_text.find("77061"), std::string::npos);
    ASSERT_EQ(r.sources.size(), 1u);
    EXPECT_EQ(r.sources[0], *r.sql + " [3 rows]");
    EXPECT_FALSE(r.degraded);

    const auto kinds = rec->kinds();
    EXPECT_EQ(kinds, (std::vector<PromptKind>{PromptKind::Classify, PromptKind::EntityTags, PromptKind::TextToSql,
                                              PromptKind::Answer}));
    const auto& answer_prompt = rec->calls().back().request.prompt;
    const auto first = answer_prompt.find("zip_code: 77061 | MAX(evacuation_rate): 57.14");
    ASSERT_NE(first, std::string::npos);
    EXPECT_LT(first, answer_prompt.find("zip_code: 77025 | MAX(evacuation_rate): 55.56"));
    EXPECT_LT(first, answer_prompt.find("zip_code: 77005 | MAX(evacuation_rate): 55.56"));
    EXPECT_EQ(engine->history(id).size(), 1u);
}

TEST(Engine, FloodPredictionScenarioGoesToTheWeb) {
    auto engine = testkit::scenario_engine(testkit::flood_model(), nullptr, testkit::flood_search());
    const auto r = engine->handle_query(engine->create_session(), testkit::kFloodPredictionQuery);
    EXPECT_EQ(r.pathway, Pathway::WebFallback);
    EXPECT_FALSE(r.is_domain_relevant);
    EXPECT_EQ(r.route_reason, "out-of-domain");
    ASSERT_FALSE(r.sources.empty());
    for (const auto& s : r.sources) EXPECT_NE(s, testkit::kFloridaUrl);
    EXPECT_FALSE(r.sql);
}

TEST(Engine, RejectedSqlRedirectsButKeepsTheRoutedPathway) {
    auto model = testkit::evacuation_model();
    auto bad = std::make_shared<llm::FixtureReplayClient>();
    bad->add({std::nullopt, PromptKind::TextToSql, {}, "DELETE FROM harvey_evacuation_data", false});
    bad->add({std::nullopt, PromptKind::Classify, {}, "TYPE=quantitative;AMBIGUOUS=0;DOMAIN=1", false});
    bad->add({std::nullopt, PromptKind::EntityTags, {}, R"({"disaster_types":["hurricane harvey"],"locations":["houston"]})", false});
    bad->add({std::nullopt, PromptKind::Answer, {}, "web answer", false});
    auto engine = testkit::scenario_engine(bad, shared_store(), testkit::flood_search());
    const auto r = engine->handle_query("s1", testkit::kEvacuationQuery);
    EXPECT_EQ(r.pathway, Pathway::StructuredAccess);
    EXPECT_EQ(r.evidence_pathway, Pathway::WebFallback);
    EXPECT_EQ(r.redirect_reason, std::optional<std::string>("ForbiddenOperation"));
    for (const auto& s : r.sources) EXPECT_EQ(s.rfind("https://", 0), 0u);
}

TEST(Engine, DocumentBranchNeedsIndices) {
    auto model = std::make_shared<llm::HeuristicModelClient>();
    auto engine = testkit::scenario_engine(model, nullptr, nullptr);
    try {
        engine->handle_query("s", "What should an emergency kit contain?");
        FAIL();
    } catch (const TurnError& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotReady);
        EXPECT_FALSE(e.trace_id().empty());
    }
    EXPECT_TRUE(engine->history("s").empty());
}

TEST(Engine, FollowUpIsRewrittenFromMemory) {
    auto engine = full_engine(std::make_shared<llm::HeuristicModelClient>());
    const auto id = engine->create_session();
    engine->handle_query(id, "How did Harvey flooding affect Houston?");
    const auto r = engine->handle_query(id, "What about storm surge there?");
    EXPECT_NE(r.rewritten_query, "What about storm surge there?");
    const auto h = engine->history(id);
    ASSERT_EQ(h.size(), 2u);
    // "there" resolves to a place named in the earlier turn
    const auto rewritten = text::to_lower(r.rewritten_query);
    const auto earlier = text::to_lower(h[0].user_query + " " + h[0].answer);
    bool resolved = false;
    for (const char* place : {"houston", "harris county", "galveston"}) {
        if (rewritten.find(std::string("in ") + place) != std::string::npos &&
            earlier.find(place) != std::string::npos) {
            resolved = true;
        }
    }
    EXPECT_TRUE(resolved) << r.rewritten_query;
    EXPECT_LT(h[0].timestamp, h[1].timestamp);
}

TEST(Engine, PathwayAlwaysEqualsRouterDecision) {
    auto engine = full_engine(std::make_shared<llm::HeuristicModelClient>());
    const auto id = engine->create_session();
    for (const char* q : {"What should an emergency kit contain?", testkit::kEvacuationQuery,
                          testkit::kFloodPredictionQuery, "Why does storm surge happen?"}) {
        const auto r = engine->handle_query(id, q);
        query::StructuredQueryRepresentation sqr;
        sqr.query_type = r.query_type;
        sqr.is_domain_relevant = r.is_domain_relevant;
        EXPECT_EQ(r.pathway, query::route(sqr).pathway) << q;
        if (r.sources.empty()) {
            EXPECT_TRUE(r.degraded);
        }
    }
}

TEST(Engine, SessionsAreIsolatedAndConcurrent) {
    auto engine = full_engine(std::make_shared<llm::HeuristicModelClient>());
    std::vector<std::string> ids;
    for (int i = 0; i < 4; ++i) ids.push_back(engine->create_session());
    std::vector<std::thread> threads;
    for (const auto& id : ids) {
        threads.emplace_back([&engine, id] {
            for (int t = 0; t < 3; ++t) engine->handle_query(id, "What should an emergency kit contain?");
        });
    }
    for (auto& t : threads) t.join();
    for (const auto& id : ids) EXPECT_EQ(engine->history(id).size(), 3u);
    EXPECT_THROW(engine->history("missing"), Error);
    EXPECT_THROW(engine->handle_query("missing", "q", false), Error);
}

TEST(Engine, SessionsPersistAcrossRestarts) {
    const auto dir = std::filesystem::temp_directory_path() / "hazardrag_engine_sessions";
    std::filesystem::remove_all(dir);
    EngineOptions opts;
    opts.session_dir = dir;
    std::string id;
    {
        auto engine = full_engine(std::make_shared<llm::HeuristicModelClient>(), opts);
        id = engine->create_session();
        engine->handle_query(id, "What should an emergency kit contain?");
    }
    auto engine = full_engine(std::make_shared<llm::HeuristicModelClient>(), opts);
    ASSERT_TRUE(engine->has_session(id));
    EXPECT_EQ(engine->history(id).size(), 1u);
    std::filesystem::remove_all(dir);
}

TEST(Engine, HealthReportsState) {
    auto engine = full_engine(std::make_shared<llm::HeuristicModelClient>());
    const auto h = engine->health();
    EXPECT_EQ(h["indices_loaded"], true);
    EXPECT_EQ(h["passages"], 3);
    EXPECT_EQ(h["store_rows"], 3);
}

TEST(Engine, ResponseJsonShape) {
    auto engine = testkit::scenario_engine(testkit::evacuation_model(), shared_store(), nullptr);
    const auto j = engine->handle_query("s", testkit::kEvacuationQuery).to_json();
    for (const char* key : {"answer_text", "pathway", "sources", "degraded", "rewritten_query", "query_type", "sql", "trace_id"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(j["pathway"], "structured");
}

TEST(Config, ParsesAndResolvesRelativePaths) {
    const auto cfg = parse_config(nlohmann::json::parse(R"({
        "corpus": "c.jsonl", "store_schema": "/abs/schema.json",
        "model": {"kind": "fixture", "fixture": "m.json"},
        "retrieval": {"strategy": "keyword", "pool_size": 50, "rerank_k": 10},
        "memory_window": 6, "listen": {"port": 9000}
    })"), "/base");
    EXPECT_EQ(cfg.corpus, std::filesystem::path("/base/c.jsonl"));
    EXPECT_EQ(cfg.store_schema, std::filesystem::path("/abs/schema.json"));
    EXPECT_EQ(cfg.model.fixture, std::filesystem::path("/base/m.json"));
    EXPECT_EQ(cfg.retrieval.strategy, retrieval::RetrievalStrategy::Keyword);
    EXPECT_EQ(cfg.retrieval.pool_size, 50u);
    EXPECT_EQ(cfg.memory_window, 6u);
    EXPECT_EQ(cfg.port, 9000);
    EXPECT_EQ(cfg.host, "127.0.0.1");
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
    for (const char* doc : {R"({"corpsu": "x"})", R"({"model": {"kind": "gpt"}})", R"({"model": {"kind": "fixture"}})",
                            R"({"retrieval": {"strategy": "magic"}})", R"({"retrieval": {"pool_size": 5, "rerank_k": 9}})"}) {
        try {
            parse_config(nlohmann::json::parse(doc), "/");
            ADD_FAILURE() << doc;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidConfig) << doc;
        }
    }
}

TEST(Config, DemoConfigurationBuildsAnEngine) {
    const auto cfg = load_config(std::filesystem::path(HAZARDRAG_FIXTURE_DIR) / ".." / ".." / "data" / "demo" / "config.json");
    auto copy = cfg;
    copy.session_dir.reset();
    copy.snapshot.reset();
    auto engine = make_engine(copy);
    EXPECT_TRUE(engine->indices_loaded());
    const auto r = engine->handle_query(engine->create_session(), testkit::kEvacuationQuery);
    EXPECT_EQ(r.pathway, Pathway::StructuredAccess);
    EXPECT_NE(r.answer_text.find("77061"), std::string::npos);
}
