#include "hazardrag/error.hpp"
#include "hazardrag/knowledge/corpus.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <sstream>

using namespace hazardrag;
using knowledge::RawPassage;

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

TEST(Corpus, IngestComputesTokenCountsAndIndexesIds) {
    const std::vector<RawPassage> raw = {{"a", "s1", "flood water rose", {}, {}},
                                         {"b", "s2", "shelters opened", {"flood"}, {"Houston"}}};
    const auto corpus = knowledge::ingest_passages(raw);
    ASSERT_EQ(corpus.count(), 2u);
    EXPECT_EQ(corpus.passages()[0].token_count, 3u);
    ASSERT_NE(corpus.find("b"), nullptr);
    EXPECT_EQ(corpus.find("b")->source_id, "s2");
    EXPECT_EQ(corpus.find("zzz"), nullptr);
}

TEST(Corpus, RejectsDuplicateBlankAndIdless) {
    EXPECT_EQ(code_of([] {
                  const std::vector<RawPassage> raw = {{"a", "", "x", {}, {}}, {"a", "", "y", {}, {}}};
                  knowledge::ingest_passages(raw);
              }),
              ErrorCode::DuplicateId);
    EXPECT_EQ(code_of([] {
                  const std::vector<RawPassage> raw = {{"a", "", "   ", {}, {}}};
                  knowledge::ingest_passages(raw);
              }),
              ErrorCode::EmptyText);
    EXPECT_EQ(code_of([] {
                  const std::vector<RawPassage> raw = {{"", "", "text", {}, {}}};
                  knowledge::ingest_passages(raw);
              }),
              ErrorCode::MalformedRecord);
}

TEST(Corpus, JsonlRoundTripAndSourceDefault) {
    std::istringstream in(
        "{\"id\":\"p1\",\"text\":\"rain fell\",\"extra\":1}\n"
        "\n"
        "{\"id\":\"p2\",\"source_id\":\"doc\",\"text\":\"wind\",\"hazard_tags\":[\"hurricane\"]}\n");
    const auto records = knowledge::read_passage_records(in);
    ASSERT_EQ(records.size(), 2u);
    EXPECT_EQ(records[0].source_id, "p1");
    EXPECT_EQ(records[1].hazard_tags, std::vector<std::string>{"hurricane"});

    std::ostringstream out;
    knowledge::write_passage_records(out, records);
    std::istringstream again(out.str());
    const auto back = knowledge::read_passage_records(again);
    EXPECT_EQ(knowledge::ingest_passages(back), knowledge::ingest_passages(records));
}

TEST(Corpus, MalformedLineIsReported) {
    std::istringstream in("{\"id\":\"p1\",\"text\":\"ok\"}\nnot json\n");
    EXPECT_EQ(code_of([&] { knowledge::read_passage_records(in); }), ErrorCode::MalformedRecord);
}
