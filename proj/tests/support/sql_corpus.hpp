#pragma once

#include "hazardrag/knowledge/structured_store.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hazardrag::testkit {

/// Four hazard-impact tables joined on zip_code, GEOID_TRACT_20 and CBG_ID,
/// with a handful of rows each.
knowledge::StructuredStore impact_store();

/// Schema-conformant read-only SELECTs over impact_store().
const std::vector<std::string>& accepted_select_corpus();

/// Mutations, DDL, multi-statement and other inputs that must never be
/// accepted, generated over the impact_store() identifiers.
std::vector<std::string> hostile_sql_corpus(std::uint64_t seed, std::size_t count);

/// Random single-table SELECT with nested predicates, for printer and
/// idempotence properties.
std::string random_select(std::uint64_t seed);

}  // namespace hazardrag::testkit
