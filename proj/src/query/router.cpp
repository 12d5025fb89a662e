#include "hazardrag/query/router.hpp"

namespace hazardrag::query {

RouteDecision route(const StructuredQueryRepresentation& sqr) noexcept {
    if (!sqr.is_domain_relevant) return {Pathway::WebFallback, kRuleOutOfDomain};
    switch (sqr.query_type) {
        case QueryType::Quantitative: return {Pathway::StructuredAccess, kRuleQuantitative};
        case QueryType::Descriptive:
        case QueryType::Explanatory: return {Pathway::DocumentRetrieval, kRuleNarrative};
        case QueryType::Locational:
        case QueryType::Contextual:
        case QueryType::Other: break;
    }
    return {Pathway::DocumentRetrieval, kRuleDefaultDocument};
}

}  // namespace hazardrag::query
