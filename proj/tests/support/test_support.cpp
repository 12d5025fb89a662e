#include "test_support.hpp"

#include "hazardrag/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace hazardrag::testkit {

std::filesystem::path fixture_path(const std::string& name) {
    return std::filesystem::path(HAZARDRAG_FIXTURE_DIR) / name;
}

knowledge::StructuredStore evacuation_store() {
    return knowledge::load_structured_store_files(fixture_path("evacuation_schema.json"));
}

std::shared_ptr<llm::FixtureReplayClient> evacuation_model() {
    return std::make_shared<llm::FixtureReplayClient>(
        llm::FixtureReplayClient::from_file(fixture_path("evacuation_model.json")));
}

std::shared_ptr<llm::FixtureReplayClient> flood_model() {
    return std::make_shared<llm::FixtureReplayClient>(
        llm::FixtureReplayClient::from_file(fixture_path("flood_model.json")));
}

std::shared_ptr<web::FixtureSearchClient> flood_search() {
    return std::make_shared<web::FixtureSearchClient>(
        web::FixtureSearchClient::from_file(fixture_path("flood_search.json")));
}

std::unique_ptr<service::Engine> scenario_engine(std::shared_ptr<llm::GenerativeModelClient> model,
                                                 std::shared_ptr<const knowledge::StructuredStore> store,
                                                 std::shared_ptr<web::SearchClient> search) {
    service::EngineComponents c;
    c.model = std::move(model);
    c.store = std::move(store);
    c.search = std::move(search);
    return std::make_unique<service::Engine>(std::move(c), service::EngineOptions{});
}

std::vector<std::string> oracle_terms(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char ch : text) {
        if (std::isspace(ch) || std::ispunct(ch)) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += static_cast<char>(std::tolower(ch));
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

double bm25_oracle(const std::vector<std::vector<std::string>>& docs, std::size_t doc,
                   const std::vector<std::string>& query, double k1, double b) {
    const double n = static_cast<double>(docs.size());
    double total_len = 0;
    for (const auto& d : docs) total_len += static_cast<double>(d.size());
    const double avgdl = total_len / n;
    const std::set<std::string> terms(query.begin(), query.end());
    double score = 0;
    for (const auto& t : terms) {
        double df = 0;
        for (const auto& d : docs) {
            if (std::find(d.begin(), d.end(), t) != d.end()) df += 1;
        }
        const double tf = static_cast<double>(std::count(docs[doc].begin(), docs[doc].end(), t));
        if (tf == 0) continue;
        const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        const double dl = static_cast<double>(docs[doc].size());
        score += idf * (tf * (k1 + 1)) / (tf + k1 * (1 - b + b * dl / avgdl));
    }
    return score;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0 || nb == 0) return 0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

namespace {
const std::vector<std::string>& vocabulary() {
    static const std::vector<std::string> words = {
        "flood", "hurricane", "houston", "surge", "levee", "shelter", "power", "outage", "heat", "wind",
        "rain", "bayou", "county", "evacuation", "damage", "road", "river", "storm", "gauge", "coast",
        "harvey", "beryl", "map", "depth", "warning", "siren", "water", "pump", "grid", "relief"};
    return words;
}
}  // namespace

std::string random_sentence(Rng& rng, std::size_t words) {
    const auto& vocab = vocabulary();
    std::string out;
    for (std::size_t i = 0; i < words; ++i) {
        if (i) out += uniform(rng, 0, 9) == 0 ? ", " : " ";
        out += vocab[uniform(rng, 0, vocab.size() - 1)];
    }
    return out + ".";
}

std::vector<knowledge::RawPassage> random_passages(Rng& rng, std::size_t count, std::size_t min_words,
                                                   std::size_t max_words) {
    std::vector<knowledge::RawPassage> out;
    for (std::size_t i = 0; i < count; ++i) {
        knowledge::RawPassage p;
        p.id = "p" + std::to_string(i);
        p.source_id = "src" + std::to_string(i % 4);
        p.text = random_sentence(rng, uniform(rng, min_words, max_words));
        out.push_back(std::move(p));
    }
    return out;
}

knowledge::Corpus random_corpus(Rng& rng, std::size_t count, std::size_t min_words, std::size_t max_words) {
    const auto raw = random_passages(rng, count, min_words, max_words);
    return knowledge::ingest_passages(raw);
}

double HashScorer::score_one(std::string_view query, std::string_view passage) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : query) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
    h = (h ^ 0xff) * 1099511628211ull;
    for (char c : passage) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
    return static_cast<double>(h % 64) / 64.0;
}

std::vector<double> HashScorer::score(std::string_view query, std::span<const std::string> passages) {
    ++calls;
    std::vector<double> out;
    for (const auto& p : passages) out.push_back(score_one(query, p));
    return out;
}

std::vector<double> FailingScorer::score(std::string_view, std::span<const std::string>) {
    throw Error(ErrorCode::ScorerFailure, "scorer offline");
}

std::vector<double> FailingEmbedder::embed(std::string_view) {
    throw Error(ErrorCode::EmbedderFailure, "embedder offline");
}

std::vector<web::WebSnippet> FailingSearch::search(const std::string&, std::size_t) {
    throw Error(ErrorCode::SearchFailure, "search offline");
}

}  // namespace hazardrag::testkit
