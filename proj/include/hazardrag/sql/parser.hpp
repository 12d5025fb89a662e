#pragma once

#include "hazardrag/sql/ast.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace hazardrag::sql {

enum class RejectReason { ForbiddenOperation, SchemaMismatch, InvalidJoin, Unparsable };

std::string_view to_label(RejectReason reason) noexcept;

struct ParseOutcome {
    std::optional<SelectStatement> statement;
    RejectReason reason = RejectReason::Unparsable;  // meaningful when statement is empty
    std::string message;
};

/// Accepts exactly one SELECT (optionally followed by one semicolon) in the
/// supported subset: DISTINCT, INNER/LEFT JOIN ... ON, WHERE, GROUP BY,
/// HAVING, ORDER BY, LIMIT/OFFSET. Any other statement form, a second
/// statement, or a data-changing keyword anywhere is ForbiddenOperation;
/// anything else outside the grammar is Unparsable.
ParseOutcome parse_select(std::string_view sql);

bool is_reserved_word(std::string_view word);

}  // namespace hazardrag::sql
