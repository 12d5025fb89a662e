#pragma once

#include "hazardrag/llm/client.hpp"

#include <string>
#include <vector>

namespace hazardrag::llm {

/// Rule-based stand-in for a hosted model so the whole system runs offline.
/// It reads the task line of each prompt and answers with keyword rules:
/// cue-word classification, lexicon tagging, template Text-to-SQL over the
/// schema block, and extractive answers. Deterministic.
class HeuristicModelClient : public GenerativeModelClient {
public:
    struct Lexicon {
        std::vector<std::string> locations;
        std::vector<std::string> disasters;
    };

    HeuristicModelClient();
    explicit HeuristicModelClient(Lexicon lexicon) : lexicon_(std::move(lexicon)) {}

    std::string generate(const GenerationRequest& request) override;

private:
    std::string rewrite(const std::string& prompt) const;
    std::string classify(const std::string& prompt) const;
    std::string tag(const std::string& prompt) const;
    std::string text_to_sql(const std::string& prompt) const;
    std::string answer(const std::string& prompt) const;
    std::string mcq(const std::string& prompt) const;
    std::string judge(const std::string& prompt) const;

    Lexicon lexicon_;
};

}  // namespace hazardrag::llm
