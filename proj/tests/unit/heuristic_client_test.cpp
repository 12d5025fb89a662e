#include "hazardrag/error.hpp"
#include "hazardrag/eval/tasks.hpp"
#include "hazardrag/llm/heuristic_client.hpp"
#include "hazardrag/query/understanding.hpp"
#include "hazardrag/text.hpp"

#include <gtest/gtest.h>

using namespace hazardrag;
using llm::HeuristicModelClient;

namespace {

std::string ask(const std::string& prompt, int max_tokens = 100) {
    HeuristicModelClient c;
    return c.generate({prompt, 0.0, max_tokens});
}

memory::MemoryEntry turn(const std::string& q, const std::string& a) {
    return {q, a, {}, memory::Timestamp(std::chrono::microseconds(1))};
}

}  // namespace

TEST(HeuristicClient, ClassifiesByCues) {
    auto label = [](const std::string& q) {
        return query::parse_classification(ask(query::build_classify_prompt(q, query::kDefaultKnowledgeScope)));
    };
    EXPECT_EQ(label("How many customers lost power in 77061?")->type, QueryType::Quantitative);
    EXPECT_EQ(label("Why does storm surge flood the coast?")->type, QueryType::Explanatory);
    EXPECT_EQ(label("What is a flood watch?")->type, QueryType::Descriptive);
    EXPECT_FALSE(label("Can we forecast next year's hurricane landfalls?")->is_domain_relevant);
    EXPECT_TRUE(label("Flood?")->is_ambiguous);
}

TEST(HeuristicClient, TagsLongestMentionsAndZipCodes) {
    const auto tags = query::parse_entity_tags(ask(query::build_entity_prompt("Flooding from Hurricane Harvey in Harris County and 77061")));
    ASSERT_TRUE(tags);
    EXPECT_NE(std::find(tags->disaster_types.begin(), tags->disaster_types.end(), "hurricane harvey"), tags->disaster_types.end());
    EXPECT_EQ(std::find(tags->disaster_types.begin(), tags->disaster_types.end(), "harvey"), tags->disaster_types.end());
    EXPECT_NE(std::find(tags->locations.begin(), tags->locations.end(), "harris county"), tags->locations.end());
    EXPECT_NE(std::find(tags->locations.begin(), tags->locations.end(), "77061"), tags->locations.end());
}

TEST(HeuristicClient, RewriteResolvesPlaceAndEvent) {
    const std::vector<memory::MemoryEntry> turns = {turn("How much rain did Hurricane Harvey drop on Houston?", "About 50 inches.")};
    const auto out = ask(query::build_rewrite_prompt("How many shelters opened there during that storm?", turns));
    EXPECT_NE(out.find("in houston"), std::string::npos) << out;
    EXPECT_NE(out.find("hurricane harvey"), std::string::npos) << out;
}

TEST(HeuristicClient, McqPicksTheSupportedOption) {
    const eval::McqItem item{"m", "How deep can moving water knock an adult down?",
                             {"Two feet", "Six inches", "Ten feet", "One mile"}, 'B'};
    const std::vector<ContextUnit> ctx = {{"s", "Six inches of moving water can knock an adult down.", 10}};
    EXPECT_EQ(eval::extract_choice(ask(eval::build_mcq_prompt(item, ctx), 16)), 'B');
}

TEST(HeuristicClient, OpenAnswerRespectsTokenLimit) {
    const eval::OeItem item{"o", "What goes in an emergency kit?", {"water"}, Difficulty::Easy};
    std::string text;
    for (int i = 0; i < 40; ++i) text += "An emergency kit should have water, food and a flashlight for every person. ";
    const std::vector<ContextUnit> ctx = {{"s", text, text::count_tokens(text)}};
    const auto out = ask(eval::build_oe_prompt(item, ctx), 30);
    EXPECT_LE(text::count_tokens(out), 30u);
    EXPECT_NE(text::to_lower(out).find("water"), std::string::npos);
}

TEST(HeuristicClient, UnknownPromptKindFails) {
    EXPECT_THROW(ask("Write me a poem"), Error);
}
