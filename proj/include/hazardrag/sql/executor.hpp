#pragma once

#include "hazardrag/knowledge/structured_store.hpp"
#include "hazardrag/sql/validator.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace hazardrag::sql {

struct RowEvidence {
    std::vector<std::string> columns;
    std::vector<knowledge::Row> rows;
    std::size_t row_count = 0;
};

/// Runs an accepted statement. The store is read-only, so this cannot change
/// state. Error(ExecutionError) on an engine-level failure.
RowEvidence execute_sql(const AcceptedSql& sql, const knowledge::StructuredStore& store);

}  // namespace hazardrag::sql
