#pragma once

#include "hazardrag/llm/client.hpp"

#include <span>
#include <string>
#include <vector>

namespace hazardrag::eval {

/// Fraction of positions where prediction equals gold. An empty prediction
/// never matches. Error(LengthMismatch), Error(EmptyInput).
double mcq_accuracy(std::span<const std::string> predictions, std::span<const std::string> golds);

/// Decides whether a response supports one gold keypoint.
class KeypointJudge {
public:
    virtual ~KeypointJudge() = default;
    virtual bool supported(const std::string& keypoint, const std::string& response) = 0;
};

/// Deterministic judge: the normalized keypoint occurs in the normalized
/// response (lowercase, punctuation to spaces, whitespace collapsed).
class OracleJudge : public KeypointJudge {
public:
    bool supported(const std::string& keypoint, const std::string& response) override;
};

/// Asks a generative model; the reply's first YES/NO word decides. Client
/// failures propagate.
class ModelJudge : public KeypointJudge {
public:
    explicit ModelJudge(llm::GenerativeModelClient& client) : client_(client) {}
    bool supported(const std::string& keypoint, const std::string& response) override;

    static std::string build_prompt(const std::string& keypoint, const std::string& response);

private:
    llm::GenerativeModelClient& client_;
};

/// Supported keypoints over all keypoints. Error(EmptyKeypoints).
double keypoint_coverage(std::span<const std::string> keypoints, const std::string& response,
                         KeypointJudge& judge);

/// Error(EmptyInput).
double mean_coverage(std::span<const double> per_item);

}  // namespace hazardrag::eval
