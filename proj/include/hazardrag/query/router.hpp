#pragma once

#include "hazardrag/query/understanding.hpp"
#include "hazardrag/types.hpp"

#include <string>

namespace hazardrag::query {

struct RouteDecision {
    Pathway pathway = Pathway::DocumentRetrieval;
    std::string reason;

    friend bool operator==(const RouteDecision&, const RouteDecision&) = default;
};

// Rule names carried in RouteDecision::reason.
inline constexpr const char* kRuleOutOfDomain = "out-of-domain";
inline constexpr const char* kRuleQuantitative = "quantitative";
inline constexpr const char* kRuleNarrative = "descriptive-or-explanatory";
inline constexpr const char* kRuleDefaultDocument = "default-document";

/// Out-of-domain requests go to the web regardless of type; quantitative to
/// structured access; everything else to document retrieval. The ambiguity
/// flag does not take part.
RouteDecision route(const StructuredQueryRepresentation& sqr) noexcept;

}  // namespace hazardrag::query
