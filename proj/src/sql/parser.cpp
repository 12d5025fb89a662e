#include "hazardrag/sql/parser.hpp"

#include "hazardrag/sql/lexer.hpp"
#include "hazardrag/text.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <stdexcept>

namespace hazardrag::sql {
namespace {

constexpr std::array kReserved = {
    "SELECT", "FROM",   "WHERE",  "GROUP",    "BY",     "HAVING", "ORDER",  "LIMIT",
    "OFFSET", "JOIN",   "INNER",  "LEFT",     "RIGHT",  "FULL",   "OUTER",  "CROSS",
    "NATURAL", "ON",    "USING",  "AS",       "AND",    "OR",     "NOT",    "IN",
    "IS",     "NULL",   "LIKE",   "GLOB",     "REGEXP", "MATCH",  "BETWEEN", "DISTINCT",
    "ALL",    "ASC",    "DESC",   "CASE",     "WHEN",   "THEN",   "ELSE",   "END",
    "EXISTS", "CAST",   "COLLATE", "ESCAPE",  "VALUES", "TABLE",  "INDEX",  "VIEW",
    "TRIGGER",
};

// Keywords that change data, schema, session state or combine statements.
// Their bare presence anywhere in the text rejects it.
constexpr std::array kForbidden = {
    "INSERT",   "UPDATE",  "DELETE",   "DROP",     "CREATE",  "ALTER",   "TRUNCATE",
    "REPLACE",  "MERGE",   "UPSERT",   "GRANT",    "REVOKE",  "ATTACH",  "DETACH",
    "PRAGMA",   "VACUUM",  "REINDEX",  "ANALYZE",  "BEGIN",   "COMMIT",  "ROLLBACK",
    "SAVEPOINT", "RELEASE", "EXEC",    "EXECUTE",  "CALL",    "SET",     "INTO",
    "LOAD",     "COPY",    "UNION",    "INTERSECT", "EXCEPT", "WITH",    "RENAME",
    "LOCK",     "UNLOCK",  "DECLARE",  "PREPARE",  "OUTFILE", "DUMPFILE",
};

template <std::size_t N>
bool contains_upper(const std::array<const char*, N>& words, std::string_view upper) {
    for (const char* w : words) {
        if (upper == w) return true;
    }
    return false;
}

struct Failure {
    RejectReason reason;
    std::string message;
};

class Parser {
public:
    explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

    SelectStatement parse_statement() {
        expect_word("SELECT");
        SelectStatement st;
        if (accept_word("DISTINCT")) {
            st.distinct = true;
        } else {
            accept_word("ALL");
        }
        st.items.push_back(parse_select_item());
        while (accept_symbol(",")) st.items.push_back(parse_select_item());

        expect_word("FROM");
        st.from = parse_table_ref();
        while (true) {
            if (peek().is_symbol(",")) fail("comma joins are not supported; use JOIN ... ON");
            Join join;
            if (accept_word("JOIN")) {
                join.kind = Join::Kind::Inner;
            } else if (accept_word("INNER")) {
                expect_word("JOIN");
                join.kind = Join::Kind::Inner;
            } else if (accept_word("LEFT")) {
                accept_word("OUTER");
                expect_word("JOIN");
                join.kind = Join::Kind::Left;
            } else if (peek().is_word("RIGHT") || peek().is_word("FULL") || peek().is_word("CROSS") ||
                       peek().is_word("NATURAL")) {
                throw Failure{RejectReason::InvalidJoin, "only INNER and LEFT joins are supported"};
            } else {
                break;
            }
            join.table = parse_table_ref();
            if (peek().is_word("USING")) {
                throw Failure{RejectReason::InvalidJoin, "JOIN ... USING is not supported; use ON"};
            }
            if (!accept_word("ON")) {
                throw Failure{RejectReason::InvalidJoin, "JOIN without an ON condition"};
            }
            join.on = parse_expr();
            st.joins.push_back(std::move(join));
        }
        if (accept_word("WHERE")) st.where = parse_expr();
        if (accept_word("GROUP")) {
            expect_word("BY");
            st.group_by.push_back(parse_expr());
            while (accept_symbol(",")) st.group_by.push_back(parse_expr());
        }
        if (accept_word("HAVING")) st.having = parse_expr();
        if (accept_word("ORDER")) {
            expect_word("BY");
            st.order_by.push_back(parse_order_item());
            while (accept_symbol(",")) st.order_by.push_back(parse_order_item());
        }
        if (accept_word("LIMIT")) {
            st.limit = parse_count();
            if (accept_word("OFFSET")) {
                st.offset = parse_count();
            } else if (peek().is_symbol(",")) {
                fail("LIMIT a, b form is not supported");
            }
        }
        accept_symbol(";");
        if (peek().kind != TokenKind::End) fail("unexpected '" + peek().text + "'");
        return st;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    const Token& advance() {
        const Token& t = peek();
        if (pos_ < tokens_.size() - 1) ++pos_;
        return t;
    }
    [[noreturn]] void fail(std::string message) const {
        throw Failure{RejectReason::Unparsable, std::move(message)};
    }
    bool accept_word(std::string_view kw) {
        if (peek().is_word(kw)) {
            advance();
            return true;
        }
        return false;
    }
    bool accept_symbol(std::string_view s) {
        if (peek().is_symbol(s)) {
            advance();
            return true;
        }
        return false;
    }
    void expect_word(std::string_view kw) {
        if (!accept_word(kw)) fail("expected " + std::string(kw));
    }
    void expect_symbol(std::string_view s) {
        if (!accept_symbol(s)) fail("expected '" + std::string(s) + "'");
    }

    bool at_identifier() const {
        const Token& t = peek();
        if (t.kind == TokenKind::QuotedIdentifier) return !t.text.empty();
        return t.kind == TokenKind::Word && !is_reserved_word(t.text);
    }
    std::string identifier(const char* what) {
        if (!at_identifier()) fail(std::string("expected ") + what);
        return advance().text;
    }

    std::optional<std::string> optional_alias() {
        if (accept_word("AS")) return identifier("alias");
        if (at_identifier()) return advance().text;
        return std::nullopt;
    }

    TableRef parse_table_ref() {
        if (peek().is_symbol("(")) fail("subqueries are not supported");
        TableRef ref;
        ref.name = identifier("table name");
        if (peek().is_symbol(".")) fail("schema-qualified table names are not supported");
        ref.alias = optional_alias();
        return ref;
    }

    SelectItem parse_select_item() {
        SelectItem item;
        item.expr = parse_expr();
        if (!std::holds_alternative<Star>(item.expr->node)) item.alias = optional_alias();
        return item;
    }

    OrderItem parse_order_item() {
        OrderItem item;
        item.expr = parse_expr();
        if (accept_word("DESC")) {
            item.descending = true;
        } else {
            accept_word("ASC");
        }
        return item;
    }

    std::int64_t parse_count() {
        const Token& t = peek();
        if (t.kind != TokenKind::Number) fail("expected a non-negative integer");
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (ec != std::errc{} || ptr != t.text.data() + t.text.size() || value < 0) {
            fail("expected a non-negative integer");
        }
        advance();
        return value;
    }

    static ExprPtr make(decltype(Expr::node) node) {
        auto e = std::make_unique<Expr>();
        e->node = std::move(node);
        return e;
    }

    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr parse_or() {
        ExprPtr lhs = parse_and();
        while (accept_word("OR")) lhs = make(Binary{"OR", std::move(lhs), parse_and()});
        return lhs;
    }

    ExprPtr parse_and() {
        ExprPtr lhs = parse_not();
        while (accept_word("AND")) lhs = make(Binary{"AND", std::move(lhs), parse_not()});
        return lhs;
    }

    ExprPtr parse_not() {
        if (accept_word("NOT")) return make(Unary{"NOT", parse_not()});
        return parse_predicate();
    }

    ExprPtr parse_predicate() {
        ExprPtr lhs = parse_additive();
        const Token& t = peek();
        if (t.kind == TokenKind::Symbol) {
            for (const char* op : {"=", "<>", "<", "<=", ">", ">="}) {
                if (t.text == op) {
                    advance();
                    return make(Binary{op, std::move(lhs), parse_additive()});
                }
            }
        }
        if (accept_word("IS")) {
            bool negated = accept_word("NOT");
            expect_word("NULL");
            return make(IsNull{std::move(lhs), negated});
        }
        bool negated = false;
        if (peek().is_word("NOT") &&
            (peek(1).is_word("IN") || peek(1).is_word("BETWEEN") || peek(1).is_word("LIKE"))) {
            advance();
            negated = true;
        }
        if (accept_word("IN")) {
            expect_symbol("(");
            if (peek().is_word("SELECT")) fail("subqueries are not supported");
            InList in{std::move(lhs), {}, negated};
            in.items.push_back(parse_expr());
            while (accept_symbol(",")) in.items.push_back(parse_expr());
            expect_symbol(")");
            return make(std::move(in));
        }
        if (accept_word("BETWEEN")) {
            ExprPtr low = parse_additive();
            expect_word("AND");
            ExprPtr high = parse_additive();
            return make(Between{std::move(lhs), std::move(low), std::move(high), negated});
        }
        if (accept_word("LIKE")) {
            ExprPtr pattern = parse_additive();
            if (peek().is_word("ESCAPE")) fail("LIKE ... ESCAPE is not supported");
            return make(Binary{negated ? "NOT LIKE" : "LIKE", std::move(lhs), std::move(pattern)});
        }
        if (negated) fail("expected IN, BETWEEN or LIKE after NOT");
        return lhs;
    }

    ExprPtr parse_additive() {
        ExprPtr lhs = parse_multiplicative();
        while (true) {
            const Token& t = peek();
            if (t.is_symbol("+") || t.is_symbol("-") || t.is_symbol("||")) {
                std::string op = advance().text;
                lhs = make(Binary{op, std::move(lhs), parse_multiplicative()});
            } else {
                return lhs;
            }
        }
    }

    ExprPtr parse_multiplicative() {
        ExprPtr lhs = parse_unary();
        while (true) {
            const Token& t = peek();
            if (t.is_symbol("*") || t.is_symbol("/") || t.is_symbol("%")) {
                std::string op = advance().text;
                lhs = make(Binary{op, std::move(lhs), parse_unary()});
            } else {
                return lhs;
            }
        }
    }

    ExprPtr parse_unary() {
        if (peek().is_symbol("-") || peek().is_symbol("+")) {
            std::string op = advance().text;
            return make(Unary{op, parse_unary()});
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::Number: {
                std::string text = advance().text;
                return make(Literal{Literal::Kind::Number, std::move(text)});
            }
            case TokenKind::String: {
                std::string text = advance().text;
                return make(Literal{Literal::Kind::String, std::move(text)});
            }
            case TokenKind::Symbol:
                if (t.is_symbol("*")) {
                    advance();
                    return make(Star{});
                }
                if (t.is_symbol("(")) {
                    advance();
                    if (peek().is_word("SELECT")) fail("subqueries are not supported");
                    ExprPtr inner = parse_expr();
                    expect_symbol(")");
                    return inner;
                }
                fail("unexpected '" + t.text + "'");
            case TokenKind::End:
                fail("unexpected end of statement");
            case TokenKind::Word:
                if (t.is_word("NULL")) {
                    advance();
                    return make(Literal{Literal::Kind::Null, "NULL"});
                }
                if (t.is_word("CASE") || t.is_word("CAST") || t.is_word("EXISTS")) {
                    fail(text::to_upper(t.text) + " expressions are not supported");
                }
                if (!is_reserved_word(t.text) && peek(1).is_symbol("(")) return parse_call();
                break;
            case TokenKind::QuotedIdentifier:
                break;
        }
        std::string first = identifier("expression");
        if (accept_symbol(".")) {
            if (accept_symbol("*")) return make(Star{first});
            std::string name = identifier("column name");
            if (peek().is_symbol(".")) fail("schema-qualified column names are not supported");
            return make(ColumnRef{first, name, false});
        }
        return make(ColumnRef{std::nullopt, first, false});
    }

    ExprPtr parse_call() {
        FunctionCall call;
        call.name = text::to_upper(advance().text);
        expect_symbol("(");
        if (accept_symbol(")")) return make(std::move(call));
        if (accept_word("DISTINCT")) call.distinct = true;
        if (peek().is_symbol("*")) {
            advance();
            call.args.push_back(make(Star{}));
        } else {
            call.args.push_back(parse_expr());
            while (accept_symbol(",")) call.args.push_back(parse_expr());
        }
        expect_symbol(")");
        return make(std::move(call));
    }

    const std::vector<Token>& tokens_;
    std::size_t pos_ = 0;
};

// ---- printing ----

enum Prec { kOr = 1, kAnd = 2, kNot = 3, kCompare = 4, kAdd = 5, kMul = 6, kUnary = 7, kAtom = 8 };

int binary_prec(const std::string& op) {
    if (op == "OR") return kOr;
    if (op == "AND") return kAnd;
    if (op == "+" || op == "-" || op == "||") return kAdd;
    if (op == "*" || op == "/" || op == "%") return kMul;
    return kCompare;
}

int prec_of(const Expr& e) {
    return std::visit(
        [](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Binary>) {
                return binary_prec(n.op);
            } else if constexpr (std::is_same_v<T, Unary>) {
                return n.op == "NOT" ? kNot : kUnary;
            } else if constexpr (std::is_same_v<T, IsNull> || std::is_same_v<T, InList> ||
                                 std::is_same_v<T, Between>) {
                return kCompare;
            } else {
                return kAtom;
            }
        },
        e.node);
}

bool is_plain_identifier(std::string_view name) {
    if (name.empty()) return false;
    auto c0 = static_cast<unsigned char>(name[0]);
    if (!(std::isalpha(c0) || c0 == '_')) return false;
    for (char ch : name) {
        auto c = static_cast<unsigned char>(ch);
        if (!(std::isalnum(c) || c == '_')) return false;
    }
    std::string upper = text::to_upper(name);
    return !is_reserved_word(upper) && !contains_upper(kForbidden, upper);
}

std::string quote_identifier(std::string_view name) {
    if (is_plain_identifier(name)) return std::string(name);
    std::string out = "\"";
    for (char c : name) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

std::string quote_string(std::string_view s) {
    std::string out = "'";
    for (char c : s) {
        out += c;
        if (c == '\'') out += '\'';
    }
    out += '\'';
    return out;
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& child, bool parens, std::string& out) {
    if (parens) out += '(';
    print(child, out);
    if (parens) out += ')';
}

void print(const Expr& e, std::string& out) {
    std::visit(
        [&out](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Literal>) {
                if (n.kind == Literal::Kind::String) {
                    out += quote_string(n.text);
                } else if (n.kind == Literal::Kind::Null) {
                    out += "NULL";
                } else {
                    out += n.text;
                }
            } else if constexpr (std::is_same_v<T, ColumnRef>) {
                if (n.qualifier) out += quote_identifier(*n.qualifier) + ".";
                out += quote_identifier(n.name);
            } else if constexpr (std::is_same_v<T, Star>) {
                if (n.qualifier) out += quote_identifier(*n.qualifier) + ".";
                out += '*';
            } else if constexpr (std::is_same_v<T, FunctionCall>) {
                out += n.name + "(";
                if (n.distinct) out += "DISTINCT ";
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    if (i) out += ", ";
                    print(*n.args[i], out);
                }
                out += ')';
            } else if constexpr (std::is_same_v<T, Unary>) {
                if (n.op == "NOT") {
                    out += "NOT ";
                    print_child(*n.operand, prec_of(*n.operand) < kNot, out);
                } else {
                    out += n.op;
                    // keep "- -x" from printing as a comment marker
                    const auto* inner = std::get_if<Unary>(&n.operand->node);
                    if (inner && inner->op != "NOT") out += ' ';
                    const auto* lit = std::get_if<Literal>(&n.operand->node);
                    if (lit && lit->kind == Literal::Kind::Number && !lit->text.empty() &&
                        lit->text[0] == '-') {
                        out += ' ';
                    }
                    print_child(*n.operand, prec_of(*n.operand) < kUnary, out);
                }
            } else if constexpr (std::is_same_v<T, Binary>) {
                int p = binary_prec(n.op);
                int lp = prec_of(*n.lhs);
                int rp = prec_of(*n.rhs);
                print_child(*n.lhs, lp < p || (lp == p && p == kCompare), out);
                out += ' ' + n.op + ' ';
                print_child(*n.rhs, rp <= p, out);
            } else if constexpr (std::is_same_v<T, IsNull>) {
                print_child(*n.operand, prec_of(*n.operand) <= kCompare, out);
                out += n.negated ? " IS NOT NULL" : " IS NULL";
            } else if constexpr (std::is_same_v<T, InList>) {
                print_child(*n.operand, prec_of(*n.operand) <= kCompare, out);
                out += n.negated ? " NOT IN (" : " IN (";
                for (std::size_t i = 0; i < n.items.size(); ++i) {
                    if (i) out += ", ";
                    print(*n.items[i], out);
                }
                out += ')';
            } else if constexpr (std::is_same_v<T, Between>) {
                print_child(*n.operand, prec_of(*n.operand) <= kCompare, out);
                out += n.negated ? " NOT BETWEEN " : " BETWEEN ";
                print_child(*n.low, prec_of(*n.low) <= kCompare, out);
                out += " AND ";
                print_child(*n.high, prec_of(*n.high) <= kCompare, out);
            }
        },
        e.node);
}

std::string print_table_ref(const TableRef& ref) {
    std::string out = quote_identifier(ref.name);
    if (ref.alias) out += " AS " + quote_identifier(*ref.alias);
    return out;
}

}  // namespace

std::string_view to_label(RejectReason reason) noexcept {
    switch (reason) {
        case RejectReason::ForbiddenOperation: return "ForbiddenOperation";
        case RejectReason::SchemaMismatch: return "SchemaMismatch";
        case RejectReason::InvalidJoin: return "InvalidJoin";
        case RejectReason::Unparsable: return "Unparsable";
    }
    return "Unparsable";
}

bool is_reserved_word(std::string_view word) {
    return contains_upper(kReserved, text::to_upper(word));
}

std::string to_sql(const Expr& expr) {
    std::string out;
    print(expr, out);
    return out;
}

std::string to_sql(const SelectStatement& st) {
    std::string out = "SELECT ";
    if (st.distinct) out += "DISTINCT ";
    for (std::size_t i = 0; i < st.items.size(); ++i) {
        if (i) out += ", ";
        print(*st.items[i].expr, out);
        if (st.items[i].alias) out += " AS " + quote_identifier(*st.items[i].alias);
    }
    out += " FROM " + print_table_ref(st.from);
    for (const auto& j : st.joins) {
        out += j.kind == Join::Kind::Left ? " LEFT JOIN " : " JOIN ";
        out += print_table_ref(j.table) + " ON ";
        print(*j.on, out);
    }
    if (st.where) {
        out += " WHERE ";
        print(*st.where, out);
    }
    if (!st.group_by.empty()) {
        out += " GROUP BY ";
        for (std::size_t i = 0; i < st.group_by.size(); ++i) {
            if (i) out += ", ";
            print(*st.group_by[i], out);
        }
    }
    if (st.having) {
        out += " HAVING ";
        print(*st.having, out);
    }
    if (!st.order_by.empty()) {
        out += " ORDER BY ";
        for (std::size_t i = 0; i < st.order_by.size(); ++i) {
            if (i) out += ", ";
            print(*st.order_by[i].expr, out);
            if (st.order_by[i].descending) out += " DESC";
        }
    }
    if (st.limit) out += " LIMIT " + std::to_string(*st.limit);
    if (st.offset) out += " OFFSET " + std::to_string(*st.offset);
    return out;
}

ParseOutcome parse_select(std::string_view sql) {
    ParseOutcome outcome;
    std::vector<Token> tokens;
    LexError lex_error;
    if (!tokenize(sql, tokens, lex_error)) {
        outcome.reason = RejectReason::Unparsable;
        outcome.message = lex_error.message;
        return outcome;
    }
    if (tokens.size() == 1) {
        outcome.message = "empty statement";
        return outcome;
    }

    // Statement separation: anything after a ';' other than more ';' is a
    // second statement.
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        if (!tokens[i].is_symbol(";")) continue;
        for (std::size_t j = i + 1; j + 1 < tokens.size(); ++j) {
            if (!tokens[j].is_symbol(";")) {
                outcome.reason = RejectReason::ForbiddenOperation;
                outcome.message = "multiple statements";
                return outcome;
            }
        }
        // collapse trailing semicolons to one
        tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(i) + 1, tokens.end() - 1);
        break;
    }

    for (const auto& t : tokens) {
        if (t.kind == TokenKind::Word && contains_upper(kForbidden, text::to_upper(t.text))) {
            outcome.reason = RejectReason::ForbiddenOperation;
            outcome.message = "forbidden keyword " + text::to_upper(t.text);
            return outcome;
        }
    }
    if (!tokens.front().is_word("SELECT")) {
        outcome.reason = tokens.front().kind == TokenKind::Word ? RejectReason::ForbiddenOperation
                                                                : RejectReason::Unparsable;
        outcome.message = "only SELECT statements are allowed";
        return outcome;
    }

    try {
        Parser parser(tokens);
        outcome.statement = parser.parse_statement();
    } catch (const Failure& f) {
        outcome.reason = f.reason;
        outcome.message = f.message;
    }
    return outcome;
}

}  // namespace hazardrag::sql
