#include "hazardrag/sql/text_to_sql.hpp"

#include "hazardrag/error.hpp"
#include "hazardrag/llm/prompt_kind.hpp"
#include "hazardrag/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace hazardrag::sql {

const std::vector<DomainMapping>& default_domain_mappings() {
    static const std::vector<DomainMapping> mappings = {
        {"largest evacuation rate", "MAX(evacuation_rate)"},
        {"total building damage", "SUM(Adj_damage_amount)"},
        {"average outage", "AVG(Customers_Out)"},
        {"group by area", "GROUP BY geographic identifier (zip_code, GEOID_TRACT_20 or CBG_ID)"},
    };
    return mappings;
}

std::string SqlPrompt::render() const {
    return instruction_block + "\n\n" + schema_block + "\n\nQuestion: " + question;
}

SqlPrompt build_sql_prompt(const query::StructuredQueryRepresentation& sqr,
                           const knowledge::StructuredStore& store,
                           const std::vector<DomainMapping>& mappings) {
    if (store.schema().tables.empty()) throw Error(ErrorCode::InvalidSchema, "store has no tables");
    SqlPrompt prompt;
    prompt.instruction_block = std::string(llm::kSqlTask) +
        "\nYou write SQL for a database of disaster impact records. Turn the request below into "
        "one SQL statement over the schema given.\n"
        "- Reference only tables and columns listed in the schema\n"
        "- Translate hazard wording into the matching SQL operators using the mappings\n"
        "- Aggregate, rank and filter as the request demands\n"
        "- Join tables only on the listed join keys\n"
        "- Filter by event or time period only when both the request and the schema support it\n"
        "- Do not use unsupported SQL operations (DROP, DELETE, UPDATE, INSERT)\n"
        "- Output only the SQL query";

    std::string schema = "Schema:";
    for (const auto& table : store.schema().tables) {
        std::vector<std::string> cols;
        cols.reserve(table.columns.size());
        for (const auto& c : table.columns) cols.push_back(c.name);
        schema += "\n" + table.name + "(" + text::join(cols, ", ") + ")";
    }
    schema += "\n\nAvailable join keys: " + text::join(store.join_keys(), ", ");
    schema += "\n\nDomain mappings:";
    for (const auto& m : mappings) schema += "\n\"" + m.phrase + "\" -> " + m.operation;
    prompt.schema_block = std::move(schema);

    prompt.question = sqr.rewritten_query.empty() ? sqr.original_query : sqr.rewritten_query;
    return prompt;
}

namespace {

constexpr std::array kStatementStarts = {
    "SELECT", "WITH",  "INSERT", "UPDATE", "DELETE",   "DROP",   "CREATE",
    "ALTER",  "PRAGMA", "ATTACH", "REPLACE", "TRUNCATE", "GRANT", "REVOKE",
};

bool starts_with_keyword(std::string_view line, std::size_t pos) {
    for (const char* kw : kStatementStarts) {
        std::string_view k(kw);
        if (pos + k.size() > line.size()) continue;
        if (text::to_upper(line.substr(pos, k.size())) != k) continue;
        if (pos > 0 && (std::isalnum(static_cast<unsigned char>(line[pos - 1])) || line[pos - 1] == '_')) continue;
        const std::size_t end = pos + k.size();
        if (end < line.size() && (std::isalnum(static_cast<unsigned char>(line[end])) || line[end] == '_')) {
            continue;
        }
        return true;
    }
    return false;
}

}  // namespace

std::string extract_sql(std::string_view reply) {
    const std::size_t fence = reply.find("```");
    if (fence != std::string_view::npos) {
        std::size_t body = reply.find('\n', fence);
        if (body != std::string_view::npos) {
            ++body;
            std::size_t close = reply.find("```", body);
            if (close == std::string_view::npos) close = reply.size();
            return text::trim(reply.substr(body, close - body));
        }
        // single-line fence: ```SELECT ...```
        std::string_view rest = reply.substr(fence + 3);
        const std::size_t close = rest.find("```");
        std::string inner = text::trim(rest.substr(0, close));
        if (text::to_lower(inner).rfind("sql", 0) == 0 && inner.size() > 3 &&
            std::isspace(static_cast<unsigned char>(inner[3]))) {
            inner = text::trim(std::string_view(inner).substr(3));
        }
        return inner;
    }
    // Prose before the statement: start at the first statement keyword that
    // begins a line or follows a colon.
    for (std::size_t i = 0; i < reply.size(); ++i) {
        const bool boundary = i == 0 || reply[i - 1] == '\n' || reply[i - 1] == ':' ||
                              (reply[i - 1] == ' ' && i >= 2 && reply[i - 2] == ':');
        if (boundary && starts_with_keyword(reply, i)) return text::trim(reply.substr(i));
    }
    return text::trim(reply);
}

std::string generate_sql(const SqlPrompt& prompt, llm::GenerativeModelClient& client) {
    std::string reply;
    try {
        reply = client.generate({prompt.render(), kSqlTemperature, kSqlMaxTokens});
    } catch (const Error& e) {
        throw Error(ErrorCode::TranslationFailed, std::string("model call failed: ") + e.what());
    }
    std::string sql = extract_sql(reply);
    if (text::is_blank(sql)) throw Error(ErrorCode::TranslationFailed, "model returned no SQL");
    return sql;
}

std::vector<ContextUnit> rows_to_units(const RowEvidence& rows, std::size_t max_rows) {
    std::vector<ContextUnit> units;
    const std::size_t n = std::min(rows.rows.size(), max_rows);
    units.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::string line;
        for (std::size_t c = 0; c < rows.columns.size(); ++c) {
            if (c) line += " | ";
            line += rows.columns[c] + ": " + knowledge::to_display(rows.rows[i][c]);
        }
        const std::size_t tokens = text::count_tokens(line);
        units.push_back({"row:" + std::to_string(i + 1), std::move(line), tokens});
    }
    return units;
}

StructuredOutcome structured_answer_flow(const query::StructuredQueryRepresentation& sqr,
                                         const knowledge::StructuredStore& store,
                                         llm::GenerativeModelClient& client) {
    FallbackRedirect redirect{sqr, {}, {}, std::nullopt, std::nullopt};
    std::string raw;
    try {
        raw = generate_sql(build_sql_prompt(sqr, store), client);
    } catch (const Error& e) {
        redirect.reason = "TranslationFailed";
        redirect.detail = e.what();
        return redirect;
    }
    redirect.raw_sql = raw;

    ValidatedSql validated = validate_sql(raw, store);
    if (!validated.accepted) {
        redirect.reason = std::string(to_label(validated.verdict.reason));
        redirect.detail = validated.verdict.message;
        return redirect;
    }
    redirect.normalized_sql = validated.statement;

    RowEvidence rows;
    try {
        rows = execute_sql(*validated.accepted, store);
    } catch (const Error& e) {
        redirect.reason = "ExecutionError";
        redirect.detail = e.what();
        return redirect;
    }

    StructuredEvidence evidence;
    evidence.context.branch = Pathway::StructuredAccess;
    evidence.context.units = rows_to_units(rows);
    for (const auto& u : evidence.context.units) evidence.context.total_tokens += u.token_count;
    evidence.context.sql = SqlProvenance{validated.statement, rows.columns, rows.row_count};
    evidence.validated = std::move(validated);
    evidence.rows = std::move(rows);
    return evidence;
}

}  // namespace hazardrag::sql
