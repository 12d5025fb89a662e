#pragma once

#include "hazardrag/knowledge/corpus.hpp"
#include "hazardrag/retrieval/embedding.hpp"
#include "hazardrag/retrieval/types.hpp"

#include <nlohmann/json.hpp>

#include <span>
#include <string>
#include <vector>

namespace hazardrag::retrieval {

/// One unit vector per passage, scanned exhaustively.
class VectorIndex {
public:
    static VectorIndex build(const knowledge::Corpus& corpus, EmbeddingClient& embedder);

    std::size_t size() const noexcept { return doc_ids_.size(); }
    std::size_t dimension() const noexcept { return dimension_; }
    const std::string& embedder_name() const noexcept { return embedder_name_; }
    const std::vector<std::string>& doc_ids() const noexcept { return doc_ids_; }
    std::span<const double> vector(std::size_t doc) const;

    nlohmann::json to_json() const;
    static VectorIndex from_json(const nlohmann::json& j);

    friend bool operator==(const VectorIndex&, const VectorIndex&) = default;

private:
    std::size_t dimension_ = 0;
    std::string embedder_name_;
    std::vector<std::string> doc_ids_;
    std::vector<double> data_;
};

/// Top-n by cosine similarity. A query without content returns nothing.
/// Error(InvalidConfig) when the embedder does not match the index.
std::vector<ScoredPassage> vector_search(std::string_view query, std::size_t n,
                                         const VectorIndex& index, EmbeddingClient& embedder);

}  // namespace hazardrag::retrieval
