#include "hazardrag/retrieval/embedding.hpp"

#include "hazardrag/error.hpp"
#include "hazardrag/http_json.hpp"
#include "hazardrag/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace hazardrag::retrieval {

void normalize_in_place(std::vector<double>& v) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    if (norm <= 0.0) return;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
}

HashingEmbedder::HashingEmbedder(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ == 0) throw Error(ErrorCode::InvalidConfig, "embedding dimension must be positive");
}

std::string HashingEmbedder::name() const {
    return "hashing-" + std::to_string(dimension_);
}

std::vector<double> HashingEmbedder::embed(std::string_view text) {
    std::vector<double> v(dimension_, 0.0);
    auto terms = text::analyze(text);
    if (terms.empty()) {
        // stop-word-only text still embeds; punctuation alone does not
        for (auto token : text::whitespace_tokens(text)) {
            if (std::any_of(token.begin(), token.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)); })) {
                terms.emplace_back(text::to_lower(token));
            }
        }
    }
    const auto bucket = [&](std::string_view feature) {
        return static_cast<std::size_t>(text::fnv1a64(feature) % dimension_);
    };
    for (const auto& term : terms) {
        v[bucket("w:" + term)] += 1.0;
        const auto padded = "<" + term + ">";
        for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
            v[bucket("c:" + padded.substr(i, 3))] += 0.25;
        }
    }
    normalize_in_place(v);
    return v;
}

std::vector<double> HttpEmbeddingClient::embed(std::string_view text) {
    if (text::is_blank(text)) return std::vector<double>(options_.dimension, 0.0);
    nlohmann::json body = {{"model", options_.model}, {"input", std::string(text)}};
    std::map<std::string, std::string> headers;
    if (!options_.api_key.empty()) headers["Authorization"] = "Bearer " + options_.api_key;
    std::vector<double> v;
    try {
        const auto reply = http::post_json(options_.url, body, headers, options_.timeout_seconds);
        v = reply.at("data").at(0).at("embedding").get<std::vector<double>>();
    } catch (const std::exception& e) {
        throw Error(ErrorCode::EmbedderFailure, e.what());
    }
    if (v.size() != options_.dimension) {
        throw Error(ErrorCode::EmbedderFailure,
                    "embedding has " + std::to_string(v.size()) + " dimensions, expected " +
                        std::to_string(options_.dimension));
    }
    normalize_in_place(v);
    return v;
}

}  // namespace hazardrag::retrieval
