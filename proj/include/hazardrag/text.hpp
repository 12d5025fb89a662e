#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hazardrag::text {

// Whitespace tokenizer backing every token budget. ASCII whitespace and the
// Unicode space separators (NBSP, U+2000..U+200A, U+3000, ...) all split.
std::vector<std::string_view> whitespace_tokens(std::string_view text);
std::size_t count_tokens(std::string_view text);

/// First `max_tokens` whitespace tokens joined by single spaces.
std::string truncate_tokens(std::string_view text, std::size_t max_tokens);

/// Lexical analyzer for BM25 and overlap scoring: whitespace split, ASCII
/// punctuation split, ASCII lowercase. Non-ASCII bytes stay inside terms.
std::vector<std::string> analyze(std::string_view text);

std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);
std::string trim(std::string_view s);
bool is_blank(std::string_view s);

/// Lowercase, ASCII punctuation replaced by spaces, whitespace collapsed.
std::string normalize_for_match(std::string_view s);

/// Case-insensitive phrase search honoring term boundaries ("ian" does not
/// occur in "christian").
bool mentions(std::string_view haystack, std::string_view phrase);

/// Bidirectional case-insensitive substring test.
bool partial_match(std::string_view a, std::string_view b);

std::uint64_t fnv1a64(std::string_view data) noexcept;
std::string hex64(std::uint64_t value);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace hazardrag::text
