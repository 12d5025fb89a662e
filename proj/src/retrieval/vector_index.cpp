#include "hazardrag/retrieval/vector_index.hpp"

#include "hazardrag/error.hpp"

namespace hazardrag::retrieval {

using nlohmann::json;

VectorIndex VectorIndex::build(const knowledge::Corpus& corpus, EmbeddingClient& embedder) {
    VectorIndex index;
    index.dimension_ = embedder.dimension();
    index.embedder_name_ = embedder.name();
    index.data_.reserve(corpus.count() * index.dimension_);
    for (const auto& passage : corpus.passages()) {
        const auto v = embedder.embed(passage.text);
        if (v.size() != index.dimension_) {
            throw Error(ErrorCode::EmbedderFailure, "embedder returned wrong dimension");
        }
        index.doc_ids_.push_back(passage.id);
        index.data_.insert(index.data_.end(), v.begin(), v.end());
    }
    return index;
}

std::span<const double> VectorIndex::vector(std::size_t doc) const {
    return std::span<const double>(data_).subspan(doc * dimension_, dimension_);
}

json VectorIndex::to_json() const {
    return {
        {"dimension", dimension_},
        {"embedder", embedder_name_},
        {"doc_ids", doc_ids_},
        {"data", data_},
    };
}

VectorIndex VectorIndex::from_json(const json& j) {
    VectorIndex index;
    try {
        index.dimension_ = j.at("dimension").get<std::size_t>();
        index.embedder_name_ = j.at("embedder").get<std::string>();
        index.doc_ids_ = j.at("doc_ids").get<std::vector<std::string>>();
        index.data_ = j.at("data").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidSnapshot, std::string("vector index: ") + e.what());
    }
    if (index.data_.size() != index.doc_ids_.size() * index.dimension_) {
        throw Error(ErrorCode::InvalidSnapshot, "vector index: data size mismatch");
    }
    return index;
}

std::vector<ScoredPassage> vector_search(std::string_view query, std::size_t n,
                                         const VectorIndex& index, EmbeddingClient& embedder) {
    if (embedder.name() != index.embedder_name() || embedder.dimension() != index.dimension()) {
        throw Error(ErrorCode::InvalidConfig, "embedder " + embedder.name() +
                                                  " does not match index built with " +
                                                  index.embedder_name());
    }
    std::vector<ScoredPassage> out;
    if (n == 0) return out;
    const auto q = embedder.embed(query);
    bool any = false;
    for (double x : q) any = any || x != 0.0;
    if (!any) return out;

    out.reserve(index.size());
    for (std::size_t d = 0; d < index.size(); ++d) {
        const auto v = index.vector(d);
        double dot = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) dot += q[i] * v[i];
        out.push_back({index.doc_ids()[d], Channel::Vector, dot});
    }
    sort_ranked(out);
    if (out.size() > n) out.resize(n);
    return out;
}

}  // namespace hazardrag::retrieval
