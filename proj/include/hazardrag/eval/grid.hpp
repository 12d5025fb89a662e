#pragma once

#include "hazardrag/eval/metrics.hpp"
#include "hazardrag/eval/tasks.hpp"
#include "hazardrag/knowledge/corpus.hpp"
#include "hazardrag/llm/client.hpp"
#include "hazardrag/retrieval/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hazardrag::eval {

inline constexpr std::size_t kSweepPoolSizes[] = {100, 150, 200};
inline constexpr std::size_t kSweepRerankDepths[] = {5, 10, 15};

struct GridSpec {
    std::vector<retrieval::RetrievalStrategy> strategies{std::begin(retrieval::kAllStrategies),
                                                         std::end(retrieval::kAllStrategies)};
    std::vector<std::size_t> pool_sizes{std::begin(kSweepPoolSizes), std::end(kSweepPoolSizes)};
    std::vector<std::size_t> rerank_depths{std::begin(kSweepRerankDepths), std::end(kSweepRerankDepths)};
    std::size_t rerank_batch = 128;
};

struct TaskSet {
    std::vector<McqItem> mcq;
    std::vector<OeItem> oe;
};

struct McqDetail {
    std::string id;
    std::string prediction;  // empty when no letter was found
    bool correct = false;
    std::vector<std::string> context_ids;
};

struct OeDetail {
    std::string id;
    std::string response;
    double coverage = 0.0;
    std::vector<std::string> context_ids;
};

struct CellResult {
    // Empty for the no-retrieval baseline.
    std::optional<retrieval::RetrievalConfig> config;
    std::optional<double> mcq_accuracy;
    std::optional<double> oe_coverage;
    std::vector<McqDetail> mcq_items;
    std::vector<OeDetail> oe_items;
    std::optional<std::string> error;

    std::string label() const;  // "baseline" or "hybrid/IR=100/k=5"
};

struct GridResult {
    CellResult baseline;
    std::vector<CellResult> cells;  // strategy-major, then IR, then k

    std::size_t cell_count() const noexcept { return cells.size() + 1; }
};

struct GridInputs {
    const TaskSet& tasks;
    const knowledge::Corpus& corpus;
    const retrieval::Indices& indices;
    retrieval::RetrievalClients retrieval_clients;
    llm::GenerativeModelClient& model;
    KeypointJudge& judge;
};

/// Baseline (question only) plus every (strategy, IR, k) cell. A failing
/// cell records its error and the sweep moves on. Error(EmptyInput) for an
/// empty task set; Error(InvalidConfig) for an empty grid axis.
GridResult run_grid(const GridInputs& inputs, const GridSpec& spec);

struct Summary {
    std::string metric;  // "mcq_accuracy" or "oe_coverage"
    double base = 0.0;
    double best = 0.0;
    std::vector<std::string> best_configs;  // all cells tied at best
    double gain = 0.0;                      // best - base
};

std::vector<Summary> summarize(const GridResult& result);

/// Full per-item report. No timestamps, so identical runs serialize to
/// identical bytes.
nlohmann::json report_json(const GridResult& result);

/// Aligned text: one summary row per metric (Base, Best, Best
/// Configuration, Absolute Gain), then one row per cell.
std::string report_table(const GridResult& result);

}  // namespace hazardrag::eval
