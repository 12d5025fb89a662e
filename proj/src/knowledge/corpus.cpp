#include "hazardrag/knowledge/corpus.hpp"

#include "hazardrag/error.hpp"
#include "hazardrag/text.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <istream>
#include <ostream>

namespace hazardrag::knowledge {

using nlohmann::json;

const Passage* Corpus::find(std::string_view id) const {
    const auto it = by_id_.find(std::string(id));
    return it == by_id_.end() ? nullptr : &passages_[it->second];
}

Corpus ingest_passages(std::span<const RawPassage> records) {
    Corpus corpus;
    corpus.passages_.reserve(records.size());
    for (const auto& record : records) {
        if (text::is_blank(record.id)) {
            throw Error(ErrorCode::MalformedRecord, "passage record without id");
        }
        if (text::is_blank(record.text)) {
            throw Error(ErrorCode::EmptyText, "passage '" + record.id + "' has blank text");
        }
        const auto [it, inserted] = corpus.by_id_.emplace(record.id, corpus.passages_.size());
        if (!inserted) {
            throw Error(ErrorCode::DuplicateId, "duplicate passage id '" + record.id + "'");
        }
        Passage passage;
        passage.id = record.id;
        passage.source_id = record.source_id.empty() ? record.id : record.source_id;
        passage.text = record.text;
        passage.hazard_tags = record.hazard_tags;
        passage.location_tags = record.location_tags;
        passage.token_count = text::count_tokens(record.text);
        corpus.passages_.push_back(std::move(passage));
    }
    return corpus;
}

namespace {

std::vector<std::string> string_list(const json& obj, const char* key, std::size_t line) {
    std::vector<std::string> out;
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return out;
    if (!it->is_array()) {
        throw Error(ErrorCode::MalformedRecord,
                    "line " + std::to_string(line) + ": '" + key + "' must be an array");
    }
    for (const auto& v : *it) {
        if (!v.is_string()) {
            throw Error(ErrorCode::MalformedRecord,
                        "line " + std::to_string(line) + ": '" + key + "' entries must be strings");
        }
        out.push_back(v.get<std::string>());
    }
    return out;
}

}  // namespace

std::vector<RawPassage> read_passage_records(std::istream& in) {
    std::vector<RawPassage> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::is_blank(line)) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::MalformedRecord,
                        "line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!obj.is_object() || !obj.contains("id") || !obj.contains("text") ||
            !obj["id"].is_string() || !obj["text"].is_string()) {
            throw Error(ErrorCode::MalformedRecord,
                        "line " + std::to_string(line_no) + ": record needs string id and text");
        }
        RawPassage record;
        record.id = obj["id"].get<std::string>();
        record.text = obj["text"].get<std::string>();
        if (auto it = obj.find("source_id"); it != obj.end() && it->is_string()) {
            record.source_id = it->get<std::string>();
        }
        if (record.source_id.empty()) record.source_id = record.id;
        record.hazard_tags = string_list(obj, "hazard_tags", line_no);
        record.location_tags = string_list(obj, "location_tags", line_no);
        records.push_back(std::move(record));
    }
    return records;
}

Corpus load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open corpus file " + path.string());
    const auto records = read_passage_records(in);
    return ingest_passages(records);
}

void write_passage_records(std::ostream& out, std::span<const RawPassage> records) {
    for (const auto& r : records) {
        json obj = {
            {"id", r.id},
            {"source_id", r.source_id},
            {"text", r.text},
            {"hazard_tags", r.hazard_tags},
            {"location_tags", r.location_tags},
        };
        out << obj.dump() << '\n';
    }
}

}  // namespace hazardrag::knowledge
