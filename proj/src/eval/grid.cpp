#include "hazardrag/eval/grid.hpp"

#include "hazardrag/error.hpp"
#include "hazardrag/response/generator.hpp"
#include "hazardrag/text.hpp"

#include <algorithm>
#include <cstdio>

namespace hazardrag::eval {
namespace {

using nlohmann::json;

std::vector<std::string> ids_of(const GroundingContext& ctx) {
    std::vector<std::string> ids;
    for (const auto& u : ctx.units) ids.push_back(u.source_id);
    return ids;
}

// Retrieval context for one question, or an empty one for the baseline.
GroundingContext context_for(const GridInputs& in, const std::optional<retrieval::RetrievalConfig>& config,
                             const std::string& question, TaskKind task) {
    if (!config) return GroundingContext{};
    return retrieval::retrieve(question, *config, task, in.corpus, in.indices, in.retrieval_clients).context;
}

void evaluate_cell(const GridInputs& in, CellResult& cell) {
    const auto& tasks = in.tasks;
    if (!tasks.mcq.empty()) {
        std::vector<std::string> preds;
        std::vector<std::string> golds;
        for (const auto& item : tasks.mcq) {
            const auto ctx = context_for(in, cell.config, item.question, TaskKind::Mcq);
            const auto reply =
                response::generate_answer(build_mcq_prompt(item, ctx.units), in.model, TaskKind::Mcq);
            const auto choice = extract_choice(reply);
            McqDetail d;
            d.id = item.id;
            d.prediction = choice ? std::string(1, *choice) : std::string();
            d.correct = choice && *choice == item.gold;
            d.context_ids = ids_of(ctx);
            preds.push_back(d.prediction);
            golds.emplace_back(1, item.gold);
            cell.mcq_items.push_back(std::move(d));
        }
        cell.mcq_accuracy = mcq_accuracy(preds, golds);
    }
    if (!tasks.oe.empty()) {
        std::vector<double> coverages;
        for (const auto& item : tasks.oe) {
            const auto ctx = context_for(in, cell.config, item.question, TaskKind::OpenEnded);
            OeDetail d;
            d.id = item.id;
            d.response = text::trim(response::generate_answer(build_oe_prompt(item, ctx.units), in.model,
                                                              TaskKind::OpenEnded, item.difficulty));
            d.coverage = keypoint_coverage(item.keypoints, d.response, in.judge);
            d.context_ids = ids_of(ctx);
            coverages.push_back(d.coverage);
            cell.oe_items.push_back(std::move(d));
        }
        cell.oe_coverage = mean_coverage(coverages);
    }
}

void run_cell(const GridInputs& in, CellResult& cell) {
    try {
        evaluate_cell(in, cell);
    } catch (const std::exception& e) {
        cell.mcq_accuracy.reset();
        cell.oe_coverage.reset();
        cell.mcq_items.clear();
        cell.oe_items.clear();
        cell.error = e.what();
    }
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

json optional_number(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

}  // namespace

std::string CellResult::label() const {
    if (!config) return "baseline";
    return std::string(retrieval::to_label(config->strategy)) + "/IR=" + std::to_string(config->pool_size) +
           "/k=" + std::to_string(config->rerank_k);
}

GridResult run_grid(const GridInputs& in, const GridSpec& spec) {
    if (in.tasks.mcq.empty() && in.tasks.oe.empty()) throw Error(ErrorCode::EmptyInput, "no evaluation items");
    if (spec.strategies.empty() || spec.pool_sizes.empty() || spec.rerank_depths.empty()) {
        throw Error(ErrorCode::InvalidConfig, "every grid axis needs at least one value");
    }
    GridResult result;
    run_cell(in, result.baseline);
    for (auto strategy : spec.strategies) {
        for (auto ir : spec.pool_sizes) {
            for (auto k : spec.rerank_depths) {
                CellResult cell;
                cell.config = retrieval::RetrievalConfig{strategy, ir, k, spec.rerank_batch};
                try {
                    retrieval::validate(*cell.config);
                    run_cell(in, cell);
                } catch (const Error& e) {
                    cell.error = e.what();
                }
                result.cells.push_back(std::move(cell));
            }
        }
    }
    return result;
}

std::vector<Summary> summarize(const GridResult& result) {
    std::vector<Summary> out;
    auto add = [&](const char* metric, auto get) {
        const std::optional<double> base = get(result.baseline);
        if (!base) return;
        Summary s;
        s.metric = metric;
        s.base = *base;
        s.best = *base;
        s.best_configs = {result.baseline.label()};
        bool any_cell = false;
        for (const auto& c : result.cells) {
            const std::optional<double> v = get(c);
            if (!v) continue;
            if (!any_cell || *v > s.best) {
                s.best = *v;
                s.best_configs = {c.label()};
                any_cell = true;
            } else if (*v == s.best) {
                s.best_configs.push_back(c.label());
            }
        }
        s.gain = s.best - s.base;
        out.push_back(std::move(s));
    };
    add("mcq_accuracy", [](const CellResult& c) { return c.mcq_accuracy; });
    add("oe_coverage", [](const CellResult& c) { return c.oe_coverage; });
    return out;
}

json report_json(const GridResult& result) {
    auto cell_json = [](const CellResult& c) {
        json j;
        j["label"] = c.label();
        if (c.config) {
            j["strategy"] = retrieval::to_label(c.config->strategy);
            j["pool_size"] = c.config->pool_size;
            j["rerank_k"] = c.config->rerank_k;
        }
        j["mcq_accuracy"] = optional_number(c.mcq_accuracy);
        j["oe_coverage"] = optional_number(c.oe_coverage);
        j["error"] = c.error ? json(*c.error) : json(nullptr);
        json mcq = json::array();
        for (const auto& d : c.mcq_items) {
            mcq.push_back({{"id", d.id}, {"prediction", d.prediction}, {"correct", d.correct},
                           {"context", d.context_ids}});
        }
        json oe = json::array();
        for (const auto& d : c.oe_items) {
            oe.push_back({{"id", d.id}, {"response", d.response}, {"coverage", d.coverage},
                          {"context", d.context_ids}});
        }
        j["mcq_items"] = std::move(mcq);
        j["oe_items"] = std::move(oe);
        return j;
    };
    json report;
    report["format"] = "hazardrag-grid-report";
    report["cell_count"] = result.cell_count();
    report["baseline"] = cell_json(result.baseline);
    json cells = json::array();
    for (const auto& c : result.cells) cells.push_back(cell_json(c));
    report["cells"] = std::move(cells);
    json summary = json::array();
    for (const auto& s : summarize(result)) {
        summary.push_back({{"metric", s.metric}, {"base", s.base}, {"best", s.best},
                           {"best_configurations", s.best_configs}, {"absolute_gain", s.gain}});
    }
    report["summary"] = std::move(summary);
    return report;
}

std::string report_table(const GridResult& result) {
    std::string out;
    out += pad("Metric", 14) + pad("Base", 9) + pad("Best", 9) + pad("Absolute Gain", 15) + "Best Configuration\n";
    for (const auto& s : summarize(result)) {
        out += pad(s.metric, 14) + pad(fixed(s.base * 100, 2), 9) + pad(fixed(s.best * 100, 2), 9) +
               pad((s.gain >= 0 ? "+" : "") + fixed(s.gain * 100, 2), 15) + text::join(s.best_configs, " / ") + "\n";
    }
    out += "\n" + pad("Cell", 26) + pad("MCQ", 9) + pad("OE", 9) + "Error\n";
    auto row = [&out](const CellResult& c) {
        out += pad(c.label(), 26) + pad(c.mcq_accuracy ? fixed(*c.mcq_accuracy * 100, 2) : "-", 9) +
               pad(c.oe_coverage ? fixed(*c.oe_coverage * 100, 2) : "-", 9) + (c.error ? *c.error : "") + "\n";
    };
    row(result.baseline);
    for (const auto& c : result.cells) row(c);
    return out;
}

}  // namespace hazardrag::eval
