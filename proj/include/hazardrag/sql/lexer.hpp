#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hazardrag::sql {

enum class TokenKind {
    Word,             // bare identifier or keyword
    QuotedIdentifier, // "name" or `name` or [name]
    Number,
    String,           // '...' with '' unescaped
    Symbol,           // operators and punctuation
    End,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;  // words keep their spelling; symbols are canonical ("<>" for "!=")
    std::size_t offset = 0;

    bool is_word(std::string_view upper_keyword) const;
    bool is_symbol(std::string_view symbol) const {
        return kind == TokenKind::Symbol && text == symbol;
    }
};

struct LexError {
    std::string message;
    std::size_t offset = 0;
};

/// Tokenizes SQL, dropping `--` and `/* */` comments. On malformed input
/// (unterminated literal or comment, stray character) returns false and fills
/// `error`. The token list always ends with an End token on success.
bool tokenize(std::string_view sql, std::vector<Token>& tokens, LexError& error);

}  // namespace hazardrag::sql
