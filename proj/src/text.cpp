#include "hazardrag/text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace hazardrag::text {

namespace {

bool is_ascii_space(unsigned char c) noexcept {
    return c == ' ' || (c >= 0x09 && c <= 0x0d);
}

bool is_unicode_space(char32_t cp) noexcept {
    return cp == 0x85 || cp == 0xa0 || cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200a) ||
           cp == 0x2028 || cp == 0x2029 || cp == 0x202f || cp == 0x205f || cp == 0x3000;
}

// Width of the whitespace sequence starting at `pos`, or 0 if none.
std::size_t space_width(std::string_view s, std::size_t pos) noexcept {
    const auto c = static_cast<unsigned char>(s[pos]);
    if (c < 0x80) return is_ascii_space(c) ? 1 : 0;

    std::size_t len = 0;
    char32_t cp = 0;
    if ((c & 0xe0) == 0xc0) {
        len = 2;
        cp = c & 0x1f;
    } else if ((c & 0xf0) == 0xe0) {
        len = 3;
        cp = c & 0x0f;
    } else {
        return 0;
    }
    if (pos + len > s.size()) return 0;
    for (std::size_t i = 1; i < len; ++i) {
        const auto cc = static_cast<unsigned char>(s[pos + i]);
        if ((cc & 0xc0) != 0x80) return 0;
        cp = (cp << 6) | (cc & 0x3f);
    }
    return is_unicode_space(cp) ? len : 0;
}

bool is_term_byte(unsigned char c) noexcept {
    return c >= 0x80 || std::isalnum(c) != 0;
}

}  // namespace

std::vector<std::string_view> whitespace_tokens(std::string_view text) {
    std::vector<std::string_view> tokens;
    std::size_t start = std::string_view::npos;
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (const auto width = space_width(text, pos); width > 0) {
            if (start != std::string_view::npos) {
                tokens.push_back(text.substr(start, pos - start));
                start = std::string_view::npos;
            }
            pos += width;
        } else {
            if (start == std::string_view::npos) start = pos;
            ++pos;
        }
    }
    if (start != std::string_view::npos) tokens.push_back(text.substr(start));
    return tokens;
}

std::size_t count_tokens(std::string_view text) {
    return whitespace_tokens(text).size();
}

std::string truncate_tokens(std::string_view text, std::size_t max_tokens) {
    const auto tokens = whitespace_tokens(text);
    std::string out;
    const auto n = std::min(max_tokens, tokens.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) out.push_back(' ');
        out.append(tokens[i]);
    }
    return out;
}

std::vector<std::string> analyze(std::string_view text) {
    std::vector<std::string> terms;
    for (auto token : whitespace_tokens(text)) {
        std::string current;
        for (char ch : token) {
            const auto c = static_cast<unsigned char>(ch);
            if (is_term_byte(c)) {
                current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
            } else if (!current.empty()) {
                terms.push_back(std::move(current));
                current.clear();
            }
        }
        if (!current.empty()) terms.push_back(std::move(current));
    }
    return terms;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string to_upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

std::string trim(std::string_view s) {
    const auto tokens = whitespace_tokens(s);
    if (tokens.empty()) return {};
    const auto begin = tokens.front().data() - s.data();
    const auto end = tokens.back().data() + tokens.back().size() - s.data();
    return std::string(s.substr(static_cast<std::size_t>(begin),
                                static_cast<std::size_t>(end - begin)));
}

bool is_blank(std::string_view s) {
    return whitespace_tokens(s).empty();
}

std::string normalize_for_match(std::string_view s) {
    std::string spaced;
    spaced.reserve(s.size());
    for (char ch : s) {
        const auto c = static_cast<unsigned char>(ch);
        spaced.push_back(is_term_byte(c) ? (c < 0x80 ? static_cast<char>(std::tolower(c)) : ch)
                                         : ' ');
    }
    return truncate_tokens(spaced, std::string_view::npos);
}

bool mentions(std::string_view haystack, std::string_view phrase) {
    const auto needle = normalize_for_match(phrase);
    if (needle.empty()) return false;
    const auto padded = " " + normalize_for_match(haystack) + " ";
    return padded.find(" " + needle + " ") != std::string::npos;
}

bool partial_match(std::string_view a, std::string_view b) {
    const auto la = to_lower(trim(a));
    const auto lb = to_lower(trim(b));
    if (la.empty() || lb.empty()) return false;
    return la.find(lb) != std::string::npos || lb.find(la) != std::string::npos;
}

std::uint64_t fnv1a64(std::string_view data) noexcept {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (char ch : data) {
        hash ^= static_cast<unsigned char>(ch);
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out.append(sep);
        out.append(parts[i]);
    }
    return out;
}

std::string format_double(double value) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) return std::to_string(value);
    return std::string(buf, end);
}

}  // namespace hazardrag::text
