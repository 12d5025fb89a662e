#pragma once

#include "hazardrag/knowledge/structured_store.hpp"
#include "hazardrag/sql/parser.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace hazardrag::sql {

struct Verdict {
    bool accepted = false;
    RejectReason reason = RejectReason::Unparsable;  // meaningful when rejected
    std::string message;
};

/// A statement that passed every guard check against a particular store's
/// schema. Only the validator can construct one, and only an AcceptedSql can
/// reach the executor.
class AcceptedSql {
public:
    const std::string& statement() const noexcept { return statement_; }

private:
    explicit AcceptedSql(std::string statement) : statement_(std::move(statement)) {}
    friend class Validator;

    std::string statement_;
};

struct ValidatedSql {
    std::string statement;  // normalized form when parsed, else the trimmed input
    std::set<std::string> tables_used;   // canonical table names
    std::set<std::string> columns_used;  // "table.column", canonical case
    Verdict verdict;
    std::optional<AcceptedSql> accepted;
};

class Validator {
public:
    explicit Validator(const knowledge::StructuredStore& store) : store_(store) {}
    ValidatedSql validate(std::string_view sql) const;

private:
    const knowledge::StructuredStore& store_;
};

inline ValidatedSql validate_sql(std::string_view sql, const knowledge::StructuredStore& store) {
    return Validator(store).validate(sql);
}

/// Functions a statement may call. Everything else is ForbiddenOperation.
const std::vector<std::string>& allowed_functions();

}  // namespace hazardrag::sql
