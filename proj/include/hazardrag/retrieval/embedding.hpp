#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hazardrag::retrieval {

/// Bi-encoder seam. embed() returns a unit vector of dimension() entries, or
/// an all-zero vector for text with no content. Error(EmbedderFailure) on
/// backend errors.
class EmbeddingClient {
public:
    virtual ~EmbeddingClient() = default;
    virtual std::vector<double> embed(std::string_view text) = 0;
    virtual std::size_t dimension() const = 0;
    /// Identifies the embedding space; vector indices remember it.
    virtual std::string name() const = 0;
};

/// Feature-hashing embedder over analyzer terms and their character
/// trigrams. Components are non-negative, so cosine lies in [0, 1].
class HashingEmbedder : public EmbeddingClient {
public:
    explicit HashingEmbedder(std::size_t dimension = 256);

    std::vector<double> embed(std::string_view text) override;
    std::size_t dimension() const override { return dimension_; }
    std::string name() const override;

private:
    std::size_t dimension_;
};

/// OpenAI-compatible embeddings endpoint; output is re-normalized.
class HttpEmbeddingClient : public EmbeddingClient {
public:
    struct Options {
        std::string url;  // full endpoint URL
        std::string model;
        std::string api_key;
        std::size_t dimension = 384;
        int timeout_seconds = 30;
    };

    explicit HttpEmbeddingClient(Options options) : options_(std::move(options)) {}

    std::vector<double> embed(std::string_view text) override;
    std::size_t dimension() const override { return options_.dimension; }
    std::string name() const override { return "http:" + options_.model; }

private:
    Options options_;
};

void normalize_in_place(std::vector<double>& v);

}  // namespace hazardrag::retrieval
