#include "hazardrag/retrieval/bm25.hpp"

#include "hazardrag/error.hpp"
#include "hazardrag/text.hpp"

#include <cmath>
#include <map>
#include <set>

namespace hazardrag::retrieval {

using nlohmann::json;

InvertedIndex InvertedIndex::build(const knowledge::Corpus& corpus, Bm25Params params) {
    InvertedIndex index;
    index.params_ = params;
    std::uint64_t total = 0;
    for (const auto& passage : corpus.passages()) {
        const auto doc = static_cast<std::uint32_t>(index.doc_ids_.size());
        index.doc_ids_.push_back(passage.id);
        const auto terms = text::analyze(passage.text);
        index.doc_lengths_.push_back(static_cast<std::uint32_t>(terms.size()));
        total += terms.size();

        std::map<std::string, std::uint32_t> tf;
        for (const auto& t : terms) ++tf[t];
        for (const auto& [term, count] : tf) index.postings_[term].push_back({doc, count});
    }
    if (!index.doc_ids_.empty()) {
        index.avg_length_ = static_cast<double>(total) / static_cast<double>(index.doc_ids_.size());
    }
    return index;
}

std::span<const Posting> InvertedIndex::postings(std::string_view term) const {
    const auto it = postings_.find(std::string(term));
    if (it == postings_.end()) return {};
    return it->second;
}

double InvertedIndex::idf(std::size_t doc_freq) const noexcept {
    const auto n = static_cast<double>(doc_ids_.size());
    const auto df = static_cast<double>(doc_freq);
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

json InvertedIndex::to_json() const {
    // std::map gives a stable term order in the snapshot.
    std::map<std::string, json> ordered;
    for (const auto& [term, list] : postings_) {
        json arr = json::array();
        for (const auto& p : list) arr.push_back({p.doc, p.tf});
        ordered.emplace(term, std::move(arr));
    }
    json terms = json::object();
    for (auto& [term, arr] : ordered) terms[term] = std::move(arr);
    return {
        {"k1", params_.k1},
        {"b", params_.b},
        {"doc_ids", doc_ids_},
        {"doc_lengths", doc_lengths_},
        {"postings", std::move(terms)},
    };
}

InvertedIndex InvertedIndex::from_json(const json& j) {
    InvertedIndex index;
    try {
        index.params_ = {j.at("k1").get<double>(), j.at("b").get<double>()};
        index.doc_ids_ = j.at("doc_ids").get<std::vector<std::string>>();
        index.doc_lengths_ = j.at("doc_lengths").get<std::vector<std::uint32_t>>();
        if (index.doc_ids_.size() != index.doc_lengths_.size()) {
            throw Error(ErrorCode::InvalidSnapshot, "keyword index: length table size mismatch");
        }
        std::uint64_t total = 0;
        for (auto len : index.doc_lengths_) total += len;
        if (!index.doc_ids_.empty()) {
            index.avg_length_ =
                static_cast<double>(total) / static_cast<double>(index.doc_ids_.size());
        }
        for (const auto& [term, arr] : j.at("postings").items()) {
            auto& list = index.postings_[term];
            for (const auto& p : arr) {
                const auto doc = p.at(0).get<std::uint32_t>();
                if (doc >= index.doc_ids_.size()) {
                    throw Error(ErrorCode::InvalidSnapshot, "keyword index: posting out of range");
                }
                list.push_back({doc, p.at(1).get<std::uint32_t>()});
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidSnapshot, std::string("keyword index: ") + e.what());
    }
    return index;
}

std::vector<ScoredPassage> keyword_search(std::string_view query, std::size_t n,
                                          const InvertedIndex& index) {
    std::vector<ScoredPassage> out;
    if (n == 0 || index.size() == 0) return out;

    const auto terms = text::analyze(query);
    const std::set<std::string> distinct(terms.begin(), terms.end());
    const auto& params = index.params();

    std::vector<double> scores(index.size(), 0.0);
    std::vector<bool> matched(index.size(), false);
    for (const auto& term : distinct) {
        const auto list = index.postings(term);
        if (list.empty()) continue;
        const double idf = index.idf(list.size());
        for (const auto& p : list) {
            const double tf = p.tf;
            const double norm = 1.0 - params.b + params.b * index.doc_length(p.doc) / index.average_length();
            scores[p.doc] += idf * tf * (params.k1 + 1.0) / (tf + params.k1 * norm);
            matched[p.doc] = true;
        }
    }
    for (std::size_t d = 0; d < scores.size(); ++d) {
        if (matched[d]) out.push_back({index.doc_ids()[d], Channel::Keyword, scores[d]});
    }
    sort_ranked(out);
    if (out.size() > n) out.resize(n);
    return out;
}

}  // namespace hazardrag::retrieval
