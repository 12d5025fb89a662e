#pragma once

#include "hazardrag/types.hpp"

#include <chrono>
#include <cstddef>
#include <deque>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hazardrag::memory {

using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;

struct MemoryEntry {
    std::string user_query;
    std::string answer;
    EntityTags entity_tags;
    Timestamp timestamp{};

    friend bool operator==(const MemoryEntry&, const MemoryEntry&) = default;
};

struct QaPair {
    std::string question;
    std::string answer;

    friend bool operator==(const QaPair&, const QaPair&) = default;
};

inline constexpr std::size_t kDefaultWindow = 10;
inline constexpr std::size_t kRewriteTurns = 3;

/// Fixed-length sliding window of interaction turns for one session,
/// oldest first.
class SessionMemory {
public:
    explicit SessionMemory(std::size_t capacity = kDefaultWindow);

    /// Appends and evicts the oldest entry once the window overflows.
    /// Error(NonMonotonicTimestamp) unless entry.timestamp is later than every
    /// stored timestamp.
    void store(MemoryEntry entry);

    /// Two-stage lookup. Stage 1 keeps entries whose stored disaster tags
    /// partially match a current disaster tag, or whose location tags
    /// partially match a current location tag (bidirectional, case-insensitive
    /// substring); the most recent `m` of those. Stage 2, only when stage 1
    /// finds nothing: the `m` most recent entries. Result is oldest first.
    std::vector<MemoryEntry> retrieve_entries(const EntityTags& current, std::size_t m) const;
    std::vector<QaPair> retrieve(const EntityTags& current, std::size_t m) const;

    /// Stored tags that the raw text mentions, for lookups that happen before
    /// the current request has been tagged.
    EntityTags tags_mentioned_in(std::string_view raw_text) const;

    const std::deque<MemoryEntry>& window() const noexcept { return window_; }
    std::size_t size() const noexcept { return window_.size(); }
    bool empty() const noexcept { return window_.empty(); }
    std::size_t capacity() const noexcept { return capacity_; }

    /// Earliest timestamp `store` will accept that is not before `now`.
    Timestamp next_timestamp(Timestamp now) const;

    void save_jsonl(std::ostream& out) const;
    static SessionMemory load_jsonl(std::istream& in, std::size_t capacity = kDefaultWindow);

    friend bool operator==(const SessionMemory&, const SessionMemory&) = default;

private:
    std::size_t capacity_;
    std::deque<MemoryEntry> window_;
};

bool tags_match(const EntityTags& stored, const EntityTags& current);

std::string entry_to_json_line(const MemoryEntry& entry);
MemoryEntry entry_from_json_line(std::string_view line);

}  // namespace hazardrag::memory
