#pragma once

#include "hazardrag/knowledge/structured_store.hpp"
#include "hazardrag/llm/client.hpp"
#include "hazardrag/query/understanding.hpp"
#include "hazardrag/sql/executor.hpp"
#include "hazardrag/sql/validator.hpp"
#include "hazardrag/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hazardrag::sql {

inline constexpr double kSqlTemperature = 0.0;
inline constexpr int kSqlMaxTokens = 300;
// Rows beyond this are counted in provenance but left out of the context.
inline constexpr std::size_t kMaxContextRows = 50;

struct DomainMapping {
    std::string phrase;
    std::string operation;
};

/// Phrase-to-operator exemplars shown to the model.
const std::vector<DomainMapping>& default_domain_mappings();

struct SqlPrompt {
    std::string instruction_block;
    std::string schema_block;
    std::string question;

    std::string render() const;
};

/// Pre: the store declares at least one table.
SqlPrompt build_sql_prompt(const query::StructuredQueryRepresentation& sqr,
                           const knowledge::StructuredStore& store,
                           const std::vector<DomainMapping>& mappings = default_domain_mappings());

/// Pulls the statement out of a model reply: fenced block contents if any,
/// otherwise the text from the first statement keyword onward.
std::string extract_sql(std::string_view reply);

/// Error(TranslationFailed) on client failure or when no statement text
/// remains after extraction.
std::string generate_sql(const SqlPrompt& prompt, llm::GenerativeModelClient& client);

struct StructuredEvidence {
    GroundingContext context;
    ValidatedSql validated;
    RowEvidence rows;
};

struct FallbackRedirect {
    query::StructuredQueryRepresentation sqr;
    std::string reason;            // "TranslationFailed", a RejectReason label, or "ExecutionError"
    std::string detail;
    std::optional<std::string> raw_sql;
    std::optional<std::string> normalized_sql;
};

using StructuredOutcome = std::variant<StructuredEvidence, FallbackRedirect>;

/// Translate, validate, execute. Any failure along the way comes back as a
/// redirect to the web branch; this never throws for translation problems.
StructuredOutcome structured_answer_flow(const query::StructuredQueryRepresentation& sqr,
                                         const knowledge::StructuredStore& store,
                                         llm::GenerativeModelClient& client);

/// One context unit per row: "col: value | col: value".
std::vector<ContextUnit> rows_to_units(const RowEvidence& rows, std::size_t max_rows = kMaxContextRows);

}  // namespace hazardrag::sql
