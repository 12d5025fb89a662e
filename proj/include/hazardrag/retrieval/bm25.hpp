#pragma once

#include "hazardrag/knowledge/corpus.hpp"
#include "hazardrag/retrieval/types.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hazardrag::retrieval {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;

    friend bool operator==(const Bm25Params&, const Bm25Params&) = default;
};

struct Posting {
    std::uint32_t doc = 0;
    std::uint32_t tf = 0;

    friend bool operator==(const Posting&, const Posting&) = default;
};

/// Term -> postings over analyzer terms, with per-document lengths.
class InvertedIndex {
public:
    static InvertedIndex build(const knowledge::Corpus& corpus, Bm25Params params = {});

    std::size_t size() const noexcept { return doc_ids_.size(); }
    const std::vector<std::string>& doc_ids() const noexcept { return doc_ids_; }
    std::uint32_t doc_length(std::size_t doc) const { return doc_lengths_.at(doc); }
    double average_length() const noexcept { return avg_length_; }
    const Bm25Params& params() const noexcept { return params_; }

    std::span<const Posting> postings(std::string_view term) const;

    /// Okapi BM25 with the non-negative idf ln(1 + (N - df + 0.5) / (df + 0.5)).
    double idf(std::size_t doc_freq) const noexcept;

    nlohmann::json to_json() const;
    static InvertedIndex from_json(const nlohmann::json& j);

    friend bool operator==(const InvertedIndex&, const InvertedIndex&) = default;

private:
    Bm25Params params_;
    std::vector<std::string> doc_ids_;
    std::vector<std::uint32_t> doc_lengths_;
    double avg_length_ = 0.0;
    std::unordered_map<std::string, std::vector<Posting>> postings_;
};

/// Top-n passages sharing at least one (distinct) query term, ranked.
std::vector<ScoredPassage> keyword_search(std::string_view query, std::size_t n,
                                          const InvertedIndex& index);

}  // namespace hazardrag::retrieval
