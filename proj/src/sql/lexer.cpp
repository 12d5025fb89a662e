#include "hazardrag/sql/lexer.hpp"

#include "hazardrag/text.hpp"

#include <cctype>

namespace hazardrag::sql {

bool Token::is_word(std::string_view upper_keyword) const {
    return kind == TokenKind::Word && text::to_upper(text) == upper_keyword;
}

namespace {

bool word_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool word_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80; }

}  // namespace

bool tokenize(std::string_view sql, std::vector<Token>& tokens, LexError& error) {
    tokens.clear();
    std::size_t i = 0;
    const auto n = sql.size();
    const auto fail = [&](std::string message, std::size_t at) {
        error = {std::move(message), at};
        return false;
    };

    while (i < n) {
        const auto c = static_cast<unsigned char>(sql[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (c == '-' && i + 1 < n && sql[i + 1] == '-') {
            while (i < n && sql[i] != '\n') ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && sql[i + 1] == '*') {
            const auto end = sql.find("*/", i + 2);
            if (end == std::string_view::npos) return fail("unterminated comment", i);
            i = end + 2;
            continue;
        }

        const auto start = i;
        if (word_start(c)) {
            while (i < n && word_char(static_cast<unsigned char>(sql[i]))) ++i;
            tokens.push_back({TokenKind::Word, std::string(sql.substr(start, i - start)), start});
            continue;
        }
        if (std::isdigit(c) || (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(sql[i + 1])))) {
            while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
            if (i < n && sql[i] == '.') {
                ++i;
                while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
            }
            if (i < n && (sql[i] == 'e' || sql[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < n && (sql[j] == '+' || sql[j] == '-')) ++j;
                if (j < n && std::isdigit(static_cast<unsigned char>(sql[j]))) {
                    i = j;
                    while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
                }
            }
            if (i < n && word_char(static_cast<unsigned char>(sql[i]))) {
                return fail("malformed number", start);
            }
            tokens.push_back({TokenKind::Number, std::string(sql.substr(start, i - start)), start});
            continue;
        }
        if (c == '\'') {
            std::string value;
            ++i;
            for (;;) {
                if (i >= n) return fail("unterminated string literal", start);
                if (sql[i] == '\'') {
                    if (i + 1 < n && sql[i + 1] == '\'') {
                        value.push_back('\'');
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                value.push_back(sql[i++]);
            }
            tokens.push_back({TokenKind::String, std::move(value), start});
            continue;
        }
        if (c == '"' || c == '`' || c == '[') {
            const char close = c == '[' ? ']' : static_cast<char>(c);
            std::string value;
            ++i;
            for (;;) {
                if (i >= n) return fail("unterminated quoted identifier", start);
                if (sql[i] == close) {
                    if (close != ']' && i + 1 < n && sql[i + 1] == close) {
                        value.push_back(close);
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                value.push_back(sql[i++]);
            }
            if (value.empty()) return fail("empty quoted identifier", start);
            tokens.push_back({TokenKind::QuotedIdentifier, std::move(value), start});
            continue;
        }

        const auto two = sql.substr(i, 2);
        if (two == "<=" || two == ">=" || two == "<>" || two == "!=" || two == "||" || two == "==") {
            std::string sym(two);
            if (sym == "!=") sym = "<>";
            if (sym == "==") sym = "=";
            tokens.push_back({TokenKind::Symbol, std::move(sym), start});
            i += 2;
            continue;
        }
        switch (c) {
            case '(': case ')': case ',': case '.': case ';': case '*': case '+': case '-':
            case '/': case '%': case '=': case '<': case '>':
                tokens.push_back({TokenKind::Symbol, std::string(1, static_cast<char>(c)), start});
                ++i;
                continue;
            default:
                return fail(std::string("unexpected character '") + static_cast<char>(c) + "'", start);
        }
    }
    tokens.push_back({TokenKind::End, "", n});
    return true;
}

}  // namespace hazardrag::sql
