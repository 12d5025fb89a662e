#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace hazardrag::sql {

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Literal {
    enum class Kind { Number, String, Null };
    Kind kind = Kind::Null;
    std::string text;
};

struct ColumnRef {
    std::optional<std::string> qualifier;
    std::string name;
    bool select_alias = false;  // resolved to a result-column alias
};

struct Star {
    std::optional<std::string> qualifier;
};

struct FunctionCall {
    std::string name;  // uppercase
    bool distinct = false;
    std::vector<ExprPtr> args;
};

struct Unary {
    std::string op;  // "NOT", "-", "+"
    ExprPtr operand;
};

struct Binary {
    std::string op;  // "OR", "AND", "=", "<>", "<", "<=", ">", ">=", "+", "-", "*", "/", "%", "||", "LIKE", "NOT LIKE"
    ExprPtr lhs;
    ExprPtr rhs;
};

struct IsNull {
    ExprPtr operand;
    bool negated = false;
};

struct InList {
    ExprPtr operand;
    std::vector<ExprPtr> items;
    bool negated = false;
};

struct Between {
    ExprPtr operand;
    ExprPtr low;
    ExprPtr high;
    bool negated = false;
};

struct Expr {
    std::variant<Literal, ColumnRef, Star, FunctionCall, Unary, Binary, IsNull, InList, Between> node;
};

struct SelectItem {
    ExprPtr expr;
    std::optional<std::string> alias;
};

struct TableRef {
    std::string name;
    std::optional<std::string> alias;
};

struct Join {
    enum class Kind { Inner, Left };
    Kind kind = Kind::Inner;
    TableRef table;
    ExprPtr on;
};

struct OrderItem {
    ExprPtr expr;
    bool descending = false;
};

struct SelectStatement {
    bool distinct = false;
    std::vector<SelectItem> items;
    TableRef from;
    std::vector<Join> joins;
    ExprPtr where;
    std::vector<ExprPtr> group_by;
    ExprPtr having;
    std::vector<OrderItem> order_by;
    std::optional<std::int64_t> limit;
    std::optional<std::int64_t> offset;
};

/// Canonical text: uppercase keywords, minimal parentheses, identifiers
/// quoted only when needed. Parsing the output yields the same tree.
std::string to_sql(const SelectStatement& statement);
std::string to_sql(const Expr& expr);

}  // namespace hazardrag::sql
