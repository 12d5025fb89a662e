#pragma once

#include "hazardrag/eval/tasks.hpp"
#include "hazardrag/knowledge/corpus.hpp"
#include "hazardrag/llm/client.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hazardrag::eval {

struct SyntheticItemKey {
    std::string marker;  // appears only in the item's gold passage
    char gold = 'A';
    bool known = false;  // answerable without context
};

struct SyntheticSuite {
    std::vector<knowledge::RawPassage> passages;
    std::vector<McqItem> mcq;
    std::map<std::string, SyntheticItemKey> keys;  // question text -> key
};

/// Deterministic for a given seed on every platform: draws come straight
/// from mt19937_64 output. Every fourth item is "known".
SyntheticSuite make_synthetic_suite(std::uint64_t seed, std::size_t passage_count = 200,
                                    std::size_t item_count = 20);

/// Stub model for the synthetic suite: answers an MCQ prompt correctly iff
/// the item is known or its gold marker is in the prompt's context, and
/// otherwise picks the next letter after the gold one.
class GoldAwareStubClient : public llm::GenerativeModelClient {
public:
    explicit GoldAwareStubClient(std::map<std::string, SyntheticItemKey> keys) : keys_(std::move(keys)) {}
    std::string generate(const llm::GenerationRequest& request) override;

private:
    std::map<std::string, SyntheticItemKey> keys_;
};

}  // namespace hazardrag::eval
