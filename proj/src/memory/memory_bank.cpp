#include "hazardrag/memory/memory_bank.hpp"

#include "hazardrag/error.hpp"
#include "hazardrag/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <istream>
#include <ostream>

namespace hazardrag::memory {

using nlohmann::json;

namespace {

bool any_partial(const std::vector<std::string>& stored, const std::vector<std::string>& current) {
    for (const auto& s : stored) {
        for (const auto& c : current) {
            if (text::partial_match(s, c)) return true;
        }
    }
    return false;
}

}  // namespace

bool tags_match(const EntityTags& stored, const EntityTags& current) {
    return any_partial(stored.disaster_types, current.disaster_types) ||
           any_partial(stored.locations, current.locations);
}

SessionMemory::SessionMemory(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw Error(ErrorCode::InvalidConfig, "memory window must be positive");
}

void SessionMemory::store(MemoryEntry entry) {
    if (!window_.empty() && entry.timestamp <= window_.back().timestamp) {
        throw Error(ErrorCode::NonMonotonicTimestamp,
                    "memory entry timestamp is not later than the previous entry");
    }
    entry.entity_tags = normalize_tags(std::move(entry.entity_tags));
    window_.push_back(std::move(entry));
    while (window_.size() > capacity_) window_.pop_front();
}

std::vector<MemoryEntry> SessionMemory::retrieve_entries(const EntityTags& current,
                                                         std::size_t m) const {
    std::vector<MemoryEntry> picked;
    if (m == 0) return picked;
    for (auto it = window_.rbegin(); it != window_.rend() && picked.size() < m; ++it) {
        if (tags_match(it->entity_tags, current)) picked.push_back(*it);
    }
    if (picked.empty()) {
        for (auto it = window_.rbegin(); it != window_.rend() && picked.size() < m; ++it) {
            picked.push_back(*it);
        }
    }
    std::reverse(picked.begin(), picked.end());
    return picked;
}

std::vector<QaPair> SessionMemory::retrieve(const EntityTags& current, std::size_t m) const {
    std::vector<QaPair> pairs;
    for (auto& e : retrieve_entries(current, m)) {
        pairs.push_back({std::move(e.user_query), std::move(e.answer)});
    }
    return pairs;
}

EntityTags SessionMemory::tags_mentioned_in(std::string_view raw_text) const {
    EntityTags found;
    for (const auto& entry : window_) {
        for (const auto& tag : entry.entity_tags.disaster_types) {
            if (text::mentions(raw_text, tag)) found.disaster_types.push_back(tag);
        }
        for (const auto& tag : entry.entity_tags.locations) {
            if (text::mentions(raw_text, tag)) found.locations.push_back(tag);
        }
    }
    return normalize_tags(std::move(found));
}

Timestamp SessionMemory::next_timestamp(Timestamp now) const {
    if (window_.empty() || now > window_.back().timestamp) return now;
    return window_.back().timestamp + std::chrono::microseconds(1);
}

std::string entry_to_json_line(const MemoryEntry& entry) {
    json obj = {
        {"user_query", entry.user_query},
        {"answer", entry.answer},
        {"entity_tags",
         {{"disaster_types", entry.entity_tags.disaster_types},
          {"locations", entry.entity_tags.locations}}},
        {"timestamp_us", entry.timestamp.time_since_epoch().count()},
    };
    return obj.dump();
}

MemoryEntry entry_from_json_line(std::string_view line) {
    try {
        const auto obj = json::parse(line);
        MemoryEntry entry;
        entry.user_query = obj.at("user_query").get<std::string>();
        entry.answer = obj.at("answer").get<std::string>();
        const auto& tags = obj.at("entity_tags");
        entry.entity_tags.disaster_types = tags.value("disaster_types", std::vector<std::string>{});
        entry.entity_tags.locations = tags.value("locations", std::vector<std::string>{});
        entry.timestamp = Timestamp(std::chrono::microseconds(obj.at("timestamp_us").get<std::int64_t>()));
        return entry;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedRecord, std::string("memory entry: ") + e.what());
    }
}

void SessionMemory::save_jsonl(std::ostream& out) const {
    for (const auto& entry : window_) out << entry_to_json_line(entry) << '\n';
}

SessionMemory SessionMemory::load_jsonl(std::istream& in, std::size_t capacity) {
    SessionMemory memory(capacity);
    std::string line;
    while (std::getline(in, line)) {
        if (text::is_blank(line)) continue;
        memory.store(entry_from_json_line(line));
    }
    return memory;
}

}  // namespace hazardrag::memory
