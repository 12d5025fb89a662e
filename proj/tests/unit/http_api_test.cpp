#include "hazardrag/llm/heuristic_client.hpp"
#include "hazardrag/service/http_api.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>
#include <httplib.h>

#include <thread>

using namespace hazardrag;
using namespace hazardrag::service;
using nlohmann::json;

namespace {

class ApiTest : public ::testing::Test {
protected:
    void start(std::unique_ptr<Engine> engine) {
        engine_ = std::move(engine);
        server_ = std::make_unique<ApiServer>(*engine_);
        port_ = server_->bind("127.0.0.1", 0);
        ASSERT_GT(port_, 0);
        thread_ = std::thread([this] { server_->listen_after_bind(); });
        server_->wait_until_ready();
        client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    }

    void TearDown() override {
        if (server_) server_->stop();
        if (thread_.joinable()) thread_.join();
    }

    std::string new_session() {
        const auto res = client_->Post("/sessions");
        EXPECT_TRUE(res);
        EXPECT_EQ(res->status, 201);
        return json::parse(res->body)["session_id"].get<std::string>();
    }

    httplib::Result ask(const std::string& id, const std::string& body) {
        return client_->Post("/sessions/" + id + "/query", body, "application/json");
    }

    std::unique_ptr<Engine> engine_;
    std::unique_ptr<ApiServer> server_;
    std::unique_ptr<httplib::Client> client_;
    std::thread thread_;
    int port_ = 0;
};

std::unique_ptr<Engine> stub_engine() {
    return testkit::scenario_engine(testkit::evacuation_model(),
                                    std::make_shared<const knowledge::StructuredStore>(testkit::evacuation_store()),
                                    nullptr);
}

}  // namespace

TEST_F(ApiTest, NewSessionHasEmptyHistory) {
    start(stub_engine());
    const auto id = new_session();
    const auto res = client_->Get("/sessions/" + id + "/history");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(json::parse(res->body), json::array());
}

TEST_F(ApiTest, StructuredTurnRoundTrip) {
    start(stub_engine());
    const auto id = new_session();
    const auto res = ask(id, json{{"text", testkit::kEvacuationQuery}}.dump());
    ASSERT_TRUE(res);
    ASSERT_EQ(res->status, 200) << res->body;
    const auto body = json::parse(res->body);
    EXPECT_EQ(body["pathway"], "structured");
    EXPECT_NE(body["answer_text"].get<std::string>().find("77061"), std::string::npos);
    EXPECT_TRUE(body["sql"].is_string());
    EXPECT_FALSE(body["trace_id"].get<std::string>().empty());

    const auto history = json::parse(client_->Get("/sessions/" + id + "/history")->body);
    ASSERT_EQ(history.size(), 1u);
    EXPECT_EQ(history[0]["user_query"], testkit::kEvacuationQuery);
}

TEST_F(ApiTest, UnknownSessionIs404) {
    start(stub_engine());
    const auto res = ask("nope", R"({"text":"hello"})");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 404);
    EXPECT_EQ(json::parse(res->body)["error"], "UnknownSession");
    EXPECT_EQ(client_->Get("/sessions/nope/history")->status, 404);
}

TEST_F(ApiTest, MalformedBodiesAre422) {
    start(stub_engine());
    const auto id = new_session();
    for (const char* body : {"not json", "{}", R"({"text": 5})", R"({"text": "   "})", "[]"}) {
        const auto res = ask(id, body);
        ASSERT_TRUE(res);
        EXPECT_EQ(res->status, 422) << body;
    }
}

TEST_F(ApiTest, MissingIndicesAre503WithTraceId) {
    start(testkit::scenario_engine(std::make_shared<llm::HeuristicModelClient>(), nullptr, nullptr));
    const auto id = new_session();
    const auto res = ask(id, R"({"text":"What should an emergency kit contain?"})");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 503);
    const auto body = json::parse(res->body);
    EXPECT_EQ(body["error"], "NotReady");
    EXPECT_TRUE(body.contains("trace_id"));
    EXPECT_EQ(json::parse(client_->Get("/health")->body)["indices_loaded"], false);
}

TEST_F(ApiTest, UpstreamFailureIs502) {
    // understanding and SQL succeed; the answer call has no fixture and fails
    auto model = std::make_shared<llm::FixtureReplayClient>();
    model->add({std::nullopt, llm::PromptKind::Classify, {}, "TYPE=quantitative;AMBIGUOUS=0;DOMAIN=1", false});
    model->add({std::nullopt, llm::PromptKind::EntityTags, {}, "{}", false});
    model->add({std::nullopt, llm::PromptKind::TextToSql, {}, "SELECT COUNT(*) FROM harvey_evacuation_data", false});
    start(testkit::scenario_engine(model,
                                   std::make_shared<const knowledge::StructuredStore>(testkit::evacuation_store()),
                                   nullptr));
    const auto id = new_session();
    const auto res = ask(id, R"({"text":"How many zip codes evacuated?"})");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 502) << res->body;
}

TEST_F(ApiTest, HealthIsOk) {
    start(stub_engine());
    const auto res = client_->Get("/health");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    const auto body = json::parse(res->body);
    EXPECT_EQ(body["status"], "ok");
    EXPECT_EQ(body["store_rows"], 3);
}
