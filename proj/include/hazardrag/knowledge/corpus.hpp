#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hazardrag::knowledge {

/// A passage record as read from the corpus file, before validation.
struct RawPassage {
    std::string id;
    std::string source_id;
    std::string text;
    std::vector<std::string> hazard_tags;
    std::vector<std::string> location_tags;
};

struct Passage {
    std::string id;
    std::string source_id;
    std::string text;
    std::vector<std::string> hazard_tags;
    std::vector<std::string> location_tags;
    std::size_t token_count = 0;

    friend bool operator==(const Passage&, const Passage&) = default;
};

/// Validated, immutable passage collection. Ids are unique.
class Corpus {
public:
    Corpus() = default;

    const std::vector<Passage>& passages() const noexcept { return passages_; }
    std::size_t count() const noexcept { return passages_.size(); }
    bool empty() const noexcept { return passages_.empty(); }

    const Passage* find(std::string_view id) const;

    friend bool operator==(const Corpus& a, const Corpus& b) { return a.passages_ == b.passages_; }

private:
    friend Corpus ingest_passages(std::span<const RawPassage> records);

    std::vector<Passage> passages_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

/// Validates records and computes token counts.
/// Throws Error(DuplicateId) on repeated ids, Error(EmptyText) on blank text,
/// Error(MalformedRecord) on a blank id.
Corpus ingest_passages(std::span<const RawPassage> records);

/// Reads JSONL passage records (id, source_id, text, hazard_tags,
/// location_tags; unknown fields ignored). A missing source_id defaults to id.
std::vector<RawPassage> read_passage_records(std::istream& in);

Corpus load_corpus(const std::filesystem::path& path);

void write_passage_records(std::ostream& out, std::span<const RawPassage> records);

}  // namespace hazardrag::knowledge
