#include "hazardrag/knowledge/structured_store.hpp"

#include "hazardrag/error.hpp"
#include "hazardrag/text.hpp"

#include <nlohmann/json.hpp>
#include <sqlite3.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace hazardrag::knowledge {

using nlohmann::json;

struct StructuredStore::State {
    SchemaDecl schema;
    std::map<std::string, std::size_t> row_counts;
    std::shared_ptr<sqlite3> db;
};

std::string_view to_label(ColumnType type) noexcept {
    switch (type) {
        case ColumnType::Integer: return "INTEGER";
        case ColumnType::Real: return "REAL";
        case ColumnType::Text: return "TEXT";
    }
    return "TEXT";
}

std::optional<ColumnType> parse_column_type(std::string_view label) noexcept {
    const auto upper = text::to_upper(text::trim(label));
    if (upper == "INTEGER" || upper == "INT" || upper == "BIGINT") return ColumnType::Integer;
    if (upper == "REAL" || upper == "DOUBLE" || upper == "FLOAT" || upper == "NUMERIC")
        return ColumnType::Real;
    if (upper == "TEXT" || upper == "STRING" || upper == "VARCHAR") return ColumnType::Text;
    return std::nullopt;
}

const ColumnDecl* TableDecl::find_column(std::string_view name) const {
    const auto lowered = text::to_lower(name);
    for (const auto& col : columns) {
        if (text::to_lower(col.name) == lowered) return &col;
    }
    return nullptr;
}

std::string to_display(const Value& value) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return "NULL";
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, double>) {
                return text::format_double(v);
            } else {
                return v;
            }
        },
        value);
}

const TableDecl* StructuredStore::find_table(std::string_view name) const {
    const auto lowered = text::to_lower(name);
    for (const auto& table : state_->schema.tables) {
        if (text::to_lower(table.name) == lowered) return &table;
    }
    return nullptr;
}

std::size_t StructuredStore::row_count(std::string_view table) const {
    const auto* decl = find_table(table);
    if (decl == nullptr) return 0;
    const auto it = state_->row_counts.find(decl->name);
    return it == state_->row_counts.end() ? 0 : it->second;
}

std::size_t StructuredStore::total_rows() const {
    std::size_t total = 0;
    for (const auto& [name, count] : state_->row_counts) total += count;
    return total;
}

namespace {

std::string quote_ident(std::string_view name) {
    std::string out = "\"";
    for (char c : name) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void check(sqlite3* db, int rc, const std::string& what) {
    if (rc != SQLITE_OK && rc != SQLITE_DONE && rc != SQLITE_ROW) {
        throw Error(ErrorCode::ExecutionError, what + ": " + sqlite3_errmsg(db));
    }
}

void exec(sqlite3* db, const std::string& statement) {
    char* err = nullptr;
    if (sqlite3_exec(db, statement.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
        std::string message = err ? err : "unknown";
        sqlite3_free(err);
        throw Error(ErrorCode::ExecutionError, message);
    }
}

std::shared_ptr<sqlite3> open_db(const std::string& path, int flags) {
    sqlite3* raw = nullptr;
    const int rc = sqlite3_open_v2(path.c_str(), &raw, flags | SQLITE_OPEN_FULLMUTEX, nullptr);
    std::shared_ptr<sqlite3> db(raw, [](sqlite3* p) { sqlite3_close(p); });
    if (rc != SQLITE_OK) {
        throw Error(ErrorCode::Io, "cannot open database " + path + ": " +
                                       (raw ? sqlite3_errmsg(raw) : "out of memory"));
    }
    return db;
}

void validate_schema(const SchemaDecl& schema) {
    if (schema.tables.empty()) {
        throw Error(ErrorCode::InvalidSchema, "schema declares no tables");
    }
    std::set<std::string> table_names;
    for (const auto& table : schema.tables) {
        if (text::is_blank(table.name)) throw Error(ErrorCode::InvalidSchema, "unnamed table");
        if (!table_names.insert(text::to_lower(table.name)).second) {
            throw Error(ErrorCode::InvalidSchema, "duplicate table " + table.name);
        }
        if (table.columns.empty()) {
            throw Error(ErrorCode::InvalidSchema, "table " + table.name + " has no columns");
        }
        std::set<std::string> cols;
        for (const auto& col : table.columns) {
            if (!cols.insert(text::to_lower(col.name)).second) {
                throw Error(ErrorCode::InvalidSchema,
                            "duplicate column " + col.name + " in table " + table.name);
            }
        }
    }
    for (const auto& key : schema.join_keys) {
        bool found = false;
        for (const auto& table : schema.tables) found = found || table.find_column(key) != nullptr;
        if (!found) {
            throw Error(ErrorCode::InvalidSchema, "join key " + key + " appears in no table");
        }
    }
}

// Checks one cell against its declared type; returns the stored form.
Value conform(const Value& value, const ColumnDecl& col, const std::string& table,
              std::size_t row_index) {
    const auto mismatch = [&] {
        return Error(ErrorCode::SchemaRowMismatch,
                     table + " row " + std::to_string(row_index) + ": column " + col.name +
                         " expects " + std::string(to_label(col.type)));
    };
    if (std::holds_alternative<std::monostate>(value)) return value;
    switch (col.type) {
        case ColumnType::Integer:
            if (!std::holds_alternative<std::int64_t>(value)) throw mismatch();
            return value;
        case ColumnType::Real:
            if (const auto* i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
            if (!std::holds_alternative<double>(value)) throw mismatch();
            return value;
        case ColumnType::Text:
            if (!std::holds_alternative<std::string>(value)) throw mismatch();
            return value;
    }
    return value;
}

void bind_value(sqlite3* db, sqlite3_stmt* stmt, int index, const Value& value) {
    int rc = SQLITE_OK;
    if (const auto* i = std::get_if<std::int64_t>(&value)) {
        rc = sqlite3_bind_int64(stmt, index, *i);
    } else if (const auto* d = std::get_if<double>(&value)) {
        rc = sqlite3_bind_double(stmt, index, *d);
    } else if (const auto* s = std::get_if<std::string>(&value)) {
        rc = sqlite3_bind_text(stmt, index, s->data(), static_cast<int>(s->size()),
                               SQLITE_TRANSIENT);
    } else {
        rc = sqlite3_bind_null(stmt, index);
    }
    check(db, rc, "bind");
}

Value column_value(sqlite3_stmt* stmt, int index) {
    switch (sqlite3_column_type(stmt, index)) {
        case SQLITE_INTEGER: return static_cast<std::int64_t>(sqlite3_column_int64(stmt, index));
        case SQLITE_FLOAT: return sqlite3_column_double(stmt, index);
        case SQLITE_NULL: return std::monostate{};
        default: {
            const auto* data = reinterpret_cast<const char*>(sqlite3_column_text(stmt, index));
            const auto size = static_cast<std::size_t>(sqlite3_column_bytes(stmt, index));
            return std::string(data ? data : "", size);
        }
    }
}

ColumnType affinity(std::string_view declared) {
    const auto upper = text::to_upper(declared);
    if (upper.find("INT") != std::string::npos) return ColumnType::Integer;
    if (upper.find("CHAR") != std::string::npos || upper.find("CLOB") != std::string::npos ||
        upper.find("TEXT") != std::string::npos || upper.empty())
        return ColumnType::Text;
    return ColumnType::Real;
}

Value parse_cell(const std::string& raw, const ColumnDecl& col, const std::string& table,
                 std::size_t row_index) {
    if (raw.empty()) return std::monostate{};
    const auto cell = text::trim(raw);
    const auto fail = [&] {
        return Error(ErrorCode::SchemaRowMismatch,
                     table + " row " + std::to_string(row_index) + ": '" + raw +
                         "' is not a valid " + std::string(to_label(col.type)) + " for " +
                         col.name);
    };
    switch (col.type) {
        case ColumnType::Integer: {
            std::int64_t v = 0;
            const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || end != cell.data() + cell.size()) throw fail();
            return v;
        }
        case ColumnType::Real: {
            double v = 0;
            const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || end != cell.data() + cell.size()) throw fail();
            return v;
        }
        case ColumnType::Text: return raw;
    }
    return raw;
}

}  // namespace

const SchemaDecl& StructuredStore::schema() const noexcept { return state_->schema; }

const std::vector<std::string>& StructuredStore::join_keys() const noexcept {
    return state_->schema.join_keys;
}

StructuredStore::ResultSet StructuredStore::run(const std::string& statement) const {
    sqlite3* db = state_->db.get();
    sqlite3_stmt* raw = nullptr;
    const char* tail = nullptr;
    const int rc = sqlite3_prepare_v2(db, statement.c_str(), -1, &raw, &tail);
    std::unique_ptr<sqlite3_stmt, decltype(&sqlite3_finalize)> stmt(raw, &sqlite3_finalize);
    check(db, rc, "prepare");
    if (!stmt) throw Error(ErrorCode::ExecutionError, "empty statement");
    if (tail != nullptr && !text::is_blank(tail)) {
        throw Error(ErrorCode::ExecutionError, "trailing statement text");
    }
    if (sqlite3_stmt_readonly(stmt.get()) == 0) {
        throw Error(ErrorCode::ExecutionError, "statement is not read-only");
    }

    ResultSet result;
    const int ncols = sqlite3_column_count(stmt.get());
    for (int i = 0; i < ncols; ++i) result.columns.emplace_back(sqlite3_column_name(stmt.get(), i));
    for (;;) {
        const int step = sqlite3_step(stmt.get());
        if (step == SQLITE_DONE) break;
        if (step != SQLITE_ROW) check(db, step, "step");
        Row row;
        row.reserve(static_cast<std::size_t>(ncols));
        for (int i = 0; i < ncols; ++i) row.push_back(column_value(stmt.get(), i));
        result.rows.push_back(std::move(row));
    }
    return result;
}

StructuredStore load_structured_store(const SchemaDecl& schema,
                                      const std::map<std::string, std::vector<Row>>& rows) {
    validate_schema(schema);
    for (const auto& [table, _] : rows) {
        bool known = false;
        for (const auto& t : schema.tables) known = known || text::to_lower(t.name) == text::to_lower(table);
        if (!known) throw Error(ErrorCode::SchemaRowMismatch, "rows for undeclared table " + table);
    }

    auto state = std::make_shared<StructuredStore::State>();
    state->schema = schema;
    state->db = open_db(":memory:", SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE);
    sqlite3* db = state->db.get();

    exec(db, "BEGIN");
    for (const auto& table : schema.tables) {
        std::string ddl = "CREATE TABLE " + quote_ident(table.name) + " (";
        std::string insert = "INSERT INTO " + quote_ident(table.name) + " VALUES (";
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            if (i > 0) {
                ddl += ", ";
                insert += ", ";
            }
            ddl += quote_ident(table.columns[i].name) + " " +
                   std::string(to_label(table.columns[i].type));
            insert += "?";
        }
        exec(db, ddl + ")");

        const std::vector<Row>* table_rows = nullptr;
        for (const auto& [name, r] : rows) {
            if (text::to_lower(name) == text::to_lower(table.name)) table_rows = &r;
        }
        std::size_t count = 0;
        if (table_rows != nullptr) {
            sqlite3_stmt* raw = nullptr;
            check(db, sqlite3_prepare_v2(db, (insert + ")").c_str(), -1, &raw, nullptr), "prepare");
            std::unique_ptr<sqlite3_stmt, decltype(&sqlite3_finalize)> stmt(raw, &sqlite3_finalize);
            for (const auto& row : *table_rows) {
                if (row.size() != table.columns.size()) {
                    throw Error(ErrorCode::SchemaRowMismatch,
                                table.name + " row " + std::to_string(count) + " has " +
                                    std::to_string(row.size()) + " values, expected " +
                                    std::to_string(table.columns.size()));
                }
                for (std::size_t i = 0; i < row.size(); ++i) {
                    bind_value(db, stmt.get(), static_cast<int>(i + 1),
                               conform(row[i], table.columns[i], table.name, count));
                }
                check(db, sqlite3_step(stmt.get()), "insert");
                sqlite3_reset(stmt.get());
                ++count;
            }
        }
        state->row_counts[table.name] = count;
    }
    exec(db, "COMMIT");
    exec(db, "PRAGMA query_only = 1");
    return StructuredStore(std::move(state));
}

SchemaDecl parse_schema_decl(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::InvalidSchema, std::string("schema file: ") + e.what());
    }
    SchemaDecl schema;
    try {
        for (const auto& t : doc.at("tables")) {
            TableDecl table;
            table.name = t.at("name").get<std::string>();
            for (const auto& c : t.at("columns")) {
                ColumnDecl col;
                col.name = c.at("name").get<std::string>();
                const auto type_label = c.value("type", std::string("TEXT"));
                const auto type = parse_column_type(type_label);
                if (!type) {
                    throw Error(ErrorCode::InvalidSchema,
                                "unknown column type '" + type_label + "' for " + col.name);
                }
                col.type = *type;
                table.columns.push_back(std::move(col));
            }
            schema.tables.push_back(std::move(table));
        }
        if (doc.contains("join_keys")) {
            schema.join_keys = doc["join_keys"].get<std::vector<std::string>>();
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidSchema, std::string("schema file: ") + e.what());
    }
    return schema;
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    char c = 0;
    const auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    const auto end_record = [&] {
        end_field();
        if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
        record.clear();
    };
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && !field_started) {
            in_quotes = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            end_record();
        } else if (c == '\r') {
            if (in.peek() == '\n') in.get(c);
            end_record();
        } else {
            field.push_back(c);
            field_started = true;
        }
    }
    if (in_quotes) throw Error(ErrorCode::MalformedRecord, "unterminated quoted CSV field");
    if (field_started || !field.empty() || !record.empty()) end_record();
    return records;
}

StructuredStore load_structured_store_files(const std::filesystem::path& schema_file) {
    std::ifstream in(schema_file);
    if (!in) throw Error(ErrorCode::Io, "cannot open schema file " + schema_file.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const auto schema = parse_schema_decl(buffer.str());

    const auto doc = json::parse(buffer.str());
    std::map<std::string, std::vector<Row>> rows;
    for (const auto& t : doc.at("tables")) {
        if (!t.contains("csv")) continue;
        const auto name = t.at("name").get<std::string>();
        const TableDecl* decl = nullptr;
        for (const auto& table : schema.tables) {
            if (table.name == name) decl = &table;
        }
        const auto csv_path = schema_file.parent_path() / t.at("csv").get<std::string>();
        std::ifstream csv(csv_path);
        if (!csv) throw Error(ErrorCode::Io, "cannot open " + csv_path.string());
        auto records = read_csv(csv);
        if (records.empty()) throw Error(ErrorCode::SchemaRowMismatch, csv_path.string() + " has no header");

        const auto& header = records.front();
        if (header.size() != decl->columns.size()) {
            throw Error(ErrorCode::SchemaRowMismatch, csv_path.string() + ": header arity differs from schema");
        }
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (text::to_lower(text::trim(header[i])) != text::to_lower(decl->columns[i].name)) {
                throw Error(ErrorCode::SchemaRowMismatch,
                            csv_path.string() + ": header column '" + header[i] + "' differs from schema");
            }
        }
        auto& table_rows = rows[name];
        for (std::size_t r = 1; r < records.size(); ++r) {
            const auto& rec = records[r];
            if (rec.size() != decl->columns.size()) {
                throw Error(ErrorCode::SchemaRowMismatch,
                            csv_path.string() + " line " + std::to_string(r + 1) + " has " +
                                std::to_string(rec.size()) + " fields, expected " +
                                std::to_string(decl->columns.size()));
            }
            Row row;
            for (std::size_t i = 0; i < rec.size(); ++i) {
                row.push_back(parse_cell(rec[i], decl->columns[i], name, r - 1));
            }
            table_rows.push_back(std::move(row));
        }
    }
    return load_structured_store(schema, rows);
}

StructuredStore load_structured_store_sqlite(const std::filesystem::path& db_file,
                                             std::vector<std::string> join_keys) {
    if (!std::filesystem::exists(db_file)) {
        throw Error(ErrorCode::Io, "database file not found: " + db_file.string());
    }
    auto state = std::make_shared<StructuredStore::State>();
    state->db = open_db(db_file.string(), SQLITE_OPEN_READONLY);
    sqlite3* db = state->db.get();

    StructuredStore probe(state);
    const auto tables = probe.run(
        "SELECT name FROM sqlite_master WHERE type = 'table' AND name NOT LIKE 'sqlite_%' "
        "ORDER BY name");
    for (const auto& t : tables.rows) {
        TableDecl table;
        table.name = std::get<std::string>(t[0]);
        const auto info = probe.run("PRAGMA table_info(" + quote_ident(table.name) + ")");
        for (const auto& col : info.rows) {
            table.columns.push_back(
                {std::get<std::string>(col[1]), affinity(std::get<std::string>(col[2]))});
        }
        const auto count = probe.run("SELECT COUNT(*) FROM " + quote_ident(table.name));
        state->row_counts[table.name] =
            static_cast<std::size_t>(std::get<std::int64_t>(count.rows.at(0).at(0)));
        state->schema.tables.push_back(std::move(table));
    }
    state->schema.join_keys = std::move(join_keys);
    validate_schema(state->schema);
    exec(db, "PRAGMA query_only = 1");
    return StructuredStore(std::move(state));
}

}  // namespace hazardrag::knowledge
