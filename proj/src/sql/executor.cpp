#include "hazardrag/sql/executor.hpp"

namespace hazardrag::knowledge {

sql::RowEvidence sql_execute_access(const sql::AcceptedSql& sql, const StructuredStore& store) {
    auto result = store.run(sql.statement());
    sql::RowEvidence evidence;
    evidence.columns = std::move(result.columns);
    evidence.rows = std::move(result.rows);
    evidence.row_count = evidence.rows.size();
    return evidence;
}

}  // namespace hazardrag::knowledge

namespace hazardrag::sql {

RowEvidence execute_sql(const AcceptedSql& sql, const knowledge::StructuredStore& store) {
    return knowledge::sql_execute_access(sql, store);
}

}  // namespace hazardrag::sql
