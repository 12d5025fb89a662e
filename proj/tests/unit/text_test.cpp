#include "hazardrag/text.hpp"

#include <gtest/gtest.h>

using namespace hazardrag;

TEST(Text, CountsWhitespaceTokensIncludingUnicodeSpaces) {
    EXPECT_EQ(text::count_tokens(""), 0u);
    EXPECT_EQ(text::count_tokens("  a  b\tc\n"), 3u);
    EXPECT_EQ(text::count_tokens("a\xC2\xA0" "b"), 2u);       // NBSP
    EXPECT_EQ(text::count_tokens("a\xE3\x80\x80" "b"), 2u);   // ideographic space
}

TEST(Text, TruncateKeepsLeadingTokens) {
    EXPECT_EQ(text::truncate_tokens("one  two three", 2), "one two");
    EXPECT_EQ(text::truncate_tokens("one", 5), "one");
    EXPECT_EQ(text::truncate_tokens("one two", 0), "");
}

TEST(Text, AnalyzeSplitsPunctuationAndLowercases) {
    const auto terms = text::analyze("Harvey's rain: 50-inches!");
    const std::vector<std::string> want = {"harvey", "s", "rain", "50", "inches"};
    EXPECT_EQ(terms, want);
}

TEST(Text, MentionsRespectsTermBoundaries) {
    EXPECT_TRUE(text::mentions("Hurricane Ian hit Florida", "ian"));
    EXPECT_FALSE(text::mentions("a christian charity", "ian"));
    EXPECT_TRUE(text::mentions("Harris County, Texas", "harris county"));
}

TEST(Text, PartialMatchIsBidirectional) {
    EXPECT_TRUE(text::partial_match("hurricane harvey", "Harvey"));
    EXPECT_TRUE(text::partial_match("harvey", "Hurricane Harvey"));
    EXPECT_FALSE(text::partial_match("beryl", "harvey"));
}

TEST(Text, NormalizeForMatch) {
    EXPECT_EQ(text::normalize_for_match("  Flood-Warning,  SYSTEM. "), "flood warning system");
}

TEST(Text, FormatDoubleRoundTrips) {
    EXPECT_EQ(text::format_double(57.14), "57.14");
    EXPECT_EQ(text::format_double(48.0), "48");
    EXPECT_EQ(std::stod(text::format_double(0.1 + 0.2)), 0.1 + 0.2);
}
