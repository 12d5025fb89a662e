#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

struct sqlite3;

namespace hazardrag::sql {
class AcceptedSql;
struct RowEvidence;
}  // namespace hazardrag::sql

namespace hazardrag::knowledge {

enum class ColumnType { Integer, Real, Text };

std::string_view to_label(ColumnType type) noexcept;
std::optional<ColumnType> parse_column_type(std::string_view label) noexcept;

struct ColumnDecl {
    std::string name;
    ColumnType type = ColumnType::Text;
};

struct TableDecl {
    std::string name;
    std::vector<ColumnDecl> columns;

    const ColumnDecl* find_column(std::string_view name) const;  // case-insensitive
};

struct SchemaDecl {
    std::vector<TableDecl> tables;
    std::vector<std::string> join_keys;
};

/// A cell value: NULL, integer, real or text.
using Value = std::variant<std::monostate, std::int64_t, double, std::string>;
using Row = std::vector<Value>;

std::string to_display(const Value& value);

/// Relational layer of the knowledge base. Read-only once loaded; reads may
/// come from several threads.
class StructuredStore {
public:
    const SchemaDecl& schema() const noexcept;
    const std::vector<std::string>& join_keys() const noexcept;

    const TableDecl* find_table(std::string_view name) const;  // case-insensitive
    std::size_t row_count(std::string_view table) const;
    std::size_t total_rows() const;

private:
    struct ResultSet {
        std::vector<std::string> columns;
        std::vector<Row> rows;
    };

    struct State;

    explicit StructuredStore(std::shared_ptr<const State> state) : state_(std::move(state)) {}

    // Only reachable with a statement that passed validation.
    ResultSet run(const std::string& statement) const;

    friend StructuredStore load_structured_store(const SchemaDecl&,
                                                 const std::map<std::string, std::vector<Row>>&);
    friend StructuredStore load_structured_store_sqlite(const std::filesystem::path&,
                                                        std::vector<std::string>);
    friend sql::RowEvidence sql_execute_access(const sql::AcceptedSql&, const StructuredStore&);

    std::shared_ptr<const State> state_;
};

/// Builds an in-memory store. Rows must match their table's arity and column
/// types (integers are accepted for REAL columns); otherwise
/// Error(SchemaRowMismatch). Tables without an entry in `rows` are empty.
/// Error(InvalidSchema) for an empty schema, duplicate names, or a join key
/// that no table declares.
StructuredStore load_structured_store(const SchemaDecl& schema,
                                      const std::map<std::string, std::vector<Row>>& rows);

/// Schema declaration file (JSON) with one CSV file per table, resolved
/// relative to the declaration file.
StructuredStore load_structured_store_files(const std::filesystem::path& schema_file);

/// Opens an existing SQLite database read-only. Declared types map onto
/// INTEGER/REAL/TEXT by SQLite affinity rules.
StructuredStore load_structured_store_sqlite(const std::filesystem::path& db_file,
                                             std::vector<std::string> join_keys);

SchemaDecl parse_schema_decl(std::string_view json_text);

/// RFC 4180 CSV reader: quoted fields, doubled quotes, CRLF tolerated.
std::vector<std::vector<std::string>> read_csv(std::istream& in);

}  // namespace hazardrag::knowledge
