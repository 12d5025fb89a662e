#include "hazardrag/error.hpp"
#include "hazardrag/eval/grid.hpp"
#include "hazardrag/eval/metrics.hpp"
#include "hazardrag/eval/synthetic.hpp"
#include "hazardrag/eval/tasks.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <functional>

using namespace hazardrag;
using namespace hazardrag::eval;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::Io;
}

}  // namespace

TEST(Metrics, McqAccuracy) {
    std::vector<std::string> gold(25, "A");
    std::vector<std::string> pred(25, "A");
    for (int i = 0; i < 6; ++i) pred[i] = "B";
    EXPECT_EQ(mcq_accuracy(pred, gold), 0.76);
    EXPECT_EQ(mcq_accuracy(gold, gold), 1.0);
    pred.assign(25, "");
    EXPECT_EQ(mcq_accuracy(pred, gold), 0.0);
    EXPECT_EQ(code_of([&] { mcq_accuracy(std::vector<std::string>{"A"}, gold); }), ErrorCode::LengthMismatch);
    EXPECT_EQ(code_of([] { mcq_accuracy({}, {}); }), ErrorCode::EmptyInput);
}

TEST(Metrics, KeypointCoverage) {
    OracleJudge judge;
    const std::vector<std::string> kps = {"bottled water", "Flashlight", "first-aid kit", "generator fuel"};
    EXPECT_NEAR(keypoint_coverage(kps, "Pack bottled water, a flashlight and a first aid kit.", judge), 0.75, 1e-12);
    EXPECT_EQ(code_of([&] { keypoint_coverage({}, "x", judge); }), ErrorCode::EmptyKeypoints);
    const std::vector<double> per = {0.75, 0.25, 1.0};
    EXPECT_NEAR(mean_coverage(per), 2.0 / 3.0, 1e-12);
    EXPECT_EQ(code_of([] { mean_coverage({}); }), ErrorCode::EmptyInput);
}

TEST(Metrics, ModelJudgeReadsTheVerdict) {
    auto yes = std::make_shared<llm::FixtureReplayClient>();
    yes->add({std::nullopt, llm::PromptKind::KeypointJudge, {"flashlight"}, "YES, it does.", false});
    yes->add({std::nullopt, llm::PromptKind::KeypointJudge, {}, "No.", false});
    llm::RecordingClient rec(yes);
    ModelJudge judge(rec);
    EXPECT_TRUE(judge.supported("flashlight", "bring a torch"));
    EXPECT_FALSE(judge.supported("water", "bring a torch"));
    EXPECT_EQ(rec.calls()[0].request.temperature, 0.0);
}

TEST(Tasks, ParseValidateAndExtract) {
    const auto items = parse_mcq_items(
        R"([{"id":"m1","question":"q?","options":{"A":"a","B":"b","C":"c","D":"d"},"gold":"c"}])");
    ASSERT_EQ(items.size(), 1u);
    EXPECT_EQ(items[0].gold, 'C');
    EXPECT_EQ(code_of([] { parse_mcq_items(R"([{"id":"m1","question":"q","options":{"A":"a"},"gold":"A"}])"); }),
              ErrorCode::MalformedRecord);
    EXPECT_EQ(code_of([] {
                  parse_oe_items(
                      R"([{"id":"o","question":"q","keypoints":["k"],"difficulty":"easy"},{"id":"o","question":"q","keypoints":["k"],"difficulty":"easy"}])");
              }),
              ErrorCode::DuplicateId);
    EXPECT_EQ(code_of([] { parse_oe_items(R"([{"id":"o","question":"q","keypoints":[],"difficulty":"easy"}])"); }), ErrorCode::EmptyKeypoints);
    const auto oe = parse_oe_items(R"([{"id":"o","question":"q","keypoints":["k"],"difficulty":"hard"}])");
    EXPECT_EQ(oe[0].difficulty, Difficulty::Hard);

    EXPECT_EQ(extract_choice("The answer is B."), 'B');
    EXPECT_EQ(extract_choice("(C)"), 'C');
    EXPECT_EQ(extract_choice("Because of Dams, A"), 'A');
    EXPECT_FALSE(extract_choice("none of these"));
}

TEST(Tasks, McqPromptLayout) {
    const McqItem item{"m", "What floods?", {"roads", "roofs", "clouds", "stars"}, 'A'};
    const std::vector<ContextUnit> ctx = {{"s", "Roads flood first.", 3}};
    const auto p = build_mcq_prompt(item, ctx);
    EXPECT_EQ(llm::detect_prompt_kind(p), llm::PromptKind::McqAnswer);
    EXPECT_NE(p.find("[1] Roads flood first."), std::string::npos);
    EXPECT_NE(p.find("Question: What floods?\nA. roads\nB. roofs\nC. clouds\nD. stars"), std::string::npos);
    EXPECT_NE(build_mcq_prompt(item, {}).find("(none)"), std::string::npos);
}

TEST(Synthetic, SuiteShapeAndDeterminism) {
    const auto a = make_synthetic_suite(5);
    const auto b = make_synthetic_suite(5);
    ASSERT_EQ(a.passages.size(), 200u);
    ASSERT_EQ(a.mcq.size(), 20u);
    for (std::size_t i = 0; i < a.passages.size(); ++i) EXPECT_EQ(a.passages[i].text, b.passages[i].text);
    std::size_t known = 0;
    for (const auto& item : a.mcq) {
        const auto& key = a.keys.at(item.question);
        known += key.known;
        std::size_t holders = 0;
        for (const auto& p : a.passages) holders += p.text.find(key.marker) != std::string::npos;
        EXPECT_EQ(holders, 1u);
    }
    EXPECT_EQ(known, 5u);
    EXPECT_NE(make_synthetic_suite(6).passages[0].text, a.passages[0].text);
}

TEST(Grid, SyntheticSweepNeverFallsBelowBaseline) {
    const auto suite = make_synthetic_suite(13, 120, 12);
    const auto corpus = knowledge::ingest_passages(suite.passages);
    retrieval::HashingEmbedder embedder(64);
    retrieval::TokenOverlapScorer scorer;
    const auto indices = retrieval::build_indices(corpus, embedder);
    GoldAwareStubClient model(suite.keys);
    OracleJudge judge;
    TaskSet tasks{suite.mcq, {}};
    GridSpec spec;
    spec.pool_sizes = {20, 40};
    spec.rerank_depths = {3, 5};
    const auto result = run_grid({tasks, corpus, indices, {embedder, scorer}, model, judge}, spec);
    ASSERT_EQ(result.cells.size(), 12u);
    EXPECT_EQ(result.cell_count(), 13u);
    ASSERT_TRUE(result.baseline.mcq_accuracy);
    for (const auto& c : result.cells) {
        ASSERT_FALSE(c.error) << *c.error;
        EXPECT_GE(*c.mcq_accuracy, *result.baseline.mcq_accuracy) << c.label();
    }
    const auto summary = summarize(result);
    ASSERT_EQ(summary.size(), 1u);
    EXPECT_EQ(summary[0].metric, "mcq_accuracy");
    EXPECT_NEAR(summary[0].gain, summary[0].best - summary[0].base, 1e-12);
    EXPECT_EQ(report_json(result).dump(), report_json(run_grid({tasks, corpus, indices, {embedder, scorer}, model, judge}, spec)).dump());
    EXPECT_NE(report_table(result).find("Absolute Gain"), std::string::npos);
}

TEST(Grid, CellFailuresAreRecordedAndEmptyInputsRejected) {
    const auto suite = make_synthetic_suite(2, 40, 4);
    const auto corpus = knowledge::ingest_passages(suite.passages);
    retrieval::HashingEmbedder embedder(32);
    retrieval::TokenOverlapScorer scorer;
    const auto indices = retrieval::build_indices(corpus, embedder);
    GoldAwareStubClient model(suite.keys);
    OracleJudge judge;
    GridSpec spec;
    spec.strategies = {retrieval::RetrievalStrategy::Keyword};
    spec.pool_sizes = {2};
    spec.rerank_depths = {5};  // deeper than the pool: invalid cell
    const TaskSet tasks{suite.mcq, {}};
    const auto result = run_grid({tasks, corpus, indices, {embedder, scorer}, model, judge}, spec);
    ASSERT_EQ(result.cells.size(), 1u);
    EXPECT_TRUE(result.cells[0].error.has_value());

    const TaskSet empty;
    EXPECT_EQ(code_of([&] { run_grid({empty, corpus, indices, {embedder, scorer}, model, judge}, GridSpec{}); }),
              ErrorCode::EmptyInput);
    GridSpec no_k;
    no_k.rerank_depths.clear();
    EXPECT_EQ(code_of([&] { run_grid({tasks, corpus, indices, {embedder, scorer}, model, judge}, no_k); }),
              ErrorCode::InvalidConfig);
}

TEST(Grid, OpenEndedCoverageUsesDifficultyBudget) {
    const std::vector<knowledge::RawPassage> raw = {{"p1", "s", "Pack water and a flashlight in the kit.", {}, {}}};
    const auto corpus = knowledge::ingest_passages(raw);
    retrieval::HashingEmbedder embedder(32);
    retrieval::TokenOverlapScorer scorer;
    const auto indices = retrieval::build_indices(corpus, embedder);
    auto inner = std::make_shared<llm::FixtureReplayClient>();
    inner->add({std::nullopt, llm::PromptKind::OpenAnswer, {"flashlight"}, "Water and a flashlight.", false});
    inner->add({std::nullopt, llm::PromptKind::OpenAnswer, {}, "Water.", false});
    llm::RecordingClient model(inner);
    OracleJudge judge;
    TaskSet tasks;
    tasks.oe = {{"o1", "What goes in the kit?", {"water", "flashlight"}, Difficulty::Easy}};
    GridSpec spec;
    spec.strategies = {retrieval::RetrievalStrategy::Keyword};
    spec.pool_sizes = {1};
    spec.rerank_depths = {1};
    const auto result = run_grid({tasks, corpus, indices, {embedder, scorer}, model, judge}, spec);
    EXPECT_DOUBLE_EQ(*result.baseline.oe_coverage, 0.5);
    EXPECT_DOUBLE_EQ(*result.cells[0].oe_coverage, 1.0);
    for (const auto& call : model.calls()) EXPECT_EQ(call.request.max_output_tokens, 80);
}
