#include "hazardrag/response/generator.hpp"

#include "hazardrag/error.hpp"
#include "hazardrag/llm/prompt_kind.hpp"
#include "hazardrag/text.hpp"

#include <fstream>
#include <sstream>

namespace hazardrag::response {
namespace {

std::string make_template(std::string_view focus) {
    std::string t(llm::kAnswerTask);
    t += "\n";
    t += focus;
    t += "\n\nEvidence:\n{context}\n\nEarlier turns in this conversation:\n{memory}\n\nRequest: {question}\n\nAnswer:";
    return t;
}

}  // namespace

const std::string& TemplateSet::for_branch(Pathway branch) const {
    switch (branch) {
        case Pathway::DocumentRetrieval: return document;
        case Pathway::StructuredAccess: return structured;
        case Pathway::WebFallback: return web;
    }
    return document;
}

const TemplateSet& default_templates() {
    static const TemplateSet set{
        make_template("Write the answer from the passages below. Combine what they say, keep to what "
                      "they support, and name the passage numbers you rely on. If the passages do not "
                      "cover the request, say so instead of guessing."),
        make_template("The evidence is the result of a database query over disaster impact records. "
                      "Report the numbers exactly as they appear in the rows: do not round, rescale or "
                      "estimate. Keep identifiers such as zip codes unchanged and keep the row order "
                      "when it expresses a ranking."),
        make_template(std::string("Answer from the web snippets below. ") + std::string(kUncertaintyInstruction) +
                      " Prefer snippets that match the place and event in the request."),
    };
    return set;
}

void check_template(const std::string& text, std::string_view name) {
    for (auto slot : {kContextSlot, kMemorySlot, kQuestionSlot}) {
        if (text.find(slot) == std::string::npos) {
            throw Error(ErrorCode::InvalidConfig,
                        "template " + std::string(name) + " lacks slot " + std::string(slot));
        }
    }
}

TemplateSet load_templates(const std::filesystem::path& dir) {
    TemplateSet set = default_templates();
    auto load = [&dir](const char* file, std::string& target) {
        const auto path = dir / file;
        if (!std::filesystem::exists(path)) return;
        std::ifstream in(path);
        if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        check_template(buf.str(), file);
        target = buf.str();
    };
    load("document.txt", set.document);
    load("structured.txt", set.structured);
    load("web.txt", set.web);
    return set;
}

std::string render_context(const GroundingContext& ctx) {
    std::string out;
    if (ctx.branch == Pathway::StructuredAccess && ctx.sql) {
        out += "SQL: " + ctx.sql->statement + "\n";
        out += "Rows returned: " + std::to_string(ctx.sql->row_count) + "\n";
        if (ctx.units.size() < ctx.sql->row_count) {
            out += "(first " + std::to_string(ctx.units.size()) + " rows shown)\n";
        }
    }
    if (ctx.units.empty()) {
        out += "(no evidence was found)";
        return out;
    }
    for (std::size_t i = 0; i < ctx.units.size(); ++i) {
        const auto& u = ctx.units[i];
        if (i) out += '\n';
        switch (ctx.branch) {
            case Pathway::DocumentRetrieval:
                out += "[" + std::to_string(i + 1) + "] (" + u.source_id + ") " + u.text;
                break;
            case Pathway::StructuredAccess:
                out += u.text;
                break;
            case Pathway::WebFallback:
                out += "[" + std::to_string(i + 1) + "] " + u.source_id + "\n" + u.text;
                break;
        }
    }
    return out;
}

std::string render_memory(std::span<const memory::QaPair> pairs) {
    std::string out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (i) out += '\n';
        out += "Q" + std::to_string(i + 1) + ": " + pairs[i].question + "\n";
        out += "A" + std::to_string(i + 1) + ": " + pairs[i].answer;
    }
    return out;
}

std::string build_prompt(const GroundingContext& ctx, std::span<const memory::QaPair> memory_pairs,
                         const std::string& question, const TemplateSet& templates) {
    const std::string& tpl = templates.for_branch(ctx.branch);
    const std::string context = render_context(ctx);
    const std::string mem = render_memory(memory_pairs);
    std::string out;
    out.reserve(tpl.size() + context.size() + mem.size() + question.size());
    std::size_t i = 0;
    while (i < tpl.size()) {
        if (tpl.compare(i, kContextSlot.size(), kContextSlot) == 0) {
            out += context;
            i += kContextSlot.size();
        } else if (tpl.compare(i, kMemorySlot.size(), kMemorySlot) == 0) {
            out += mem;
            i += kMemorySlot.size();
        } else if (tpl.compare(i, kQuestionSlot.size(), kQuestionSlot) == 0) {
            out += question;
            i += kQuestionSlot.size();
        } else {
            out += tpl[i++];
        }
    }
    return out;
}

DecodingParams decoding_params(TaskKind task, std::optional<Difficulty> difficulty) {
    switch (task) {
        case TaskKind::Mcq: return {0.0, kMcqMaxTokens};
        case TaskKind::Interactive: return {kOpenTemperature, kInteractiveMaxTokens};
        case TaskKind::OpenEnded:
            if (!difficulty) return {kOpenTemperature, 400};
            switch (*difficulty) {
                case Difficulty::Easy: return {kOpenTemperature, 80};
                case Difficulty::Medium: return {kOpenTemperature, 180};
                case Difficulty::Hard: return {kOpenTemperature, 300};
                case Difficulty::Extreme: return {kOpenTemperature, 400};
            }
    }
    return {kOpenTemperature, kInteractiveMaxTokens};
}

std::string generate_answer(const std::string& prompt, llm::GenerativeModelClient& client, TaskKind task,
                            std::optional<Difficulty> difficulty) {
    const auto params = decoding_params(task, difficulty);
    return client.generate({prompt, params.temperature, params.max_output_tokens});
}

std::vector<std::string> sources_for(const GroundingContext& ctx) {
    std::vector<std::string> sources;
    if (ctx.branch == Pathway::StructuredAccess) {
        if (ctx.sql) sources.push_back(ctx.sql->statement + " [" + std::to_string(ctx.sql->row_count) + " rows]");
        return sources;
    }
    for (const auto& u : ctx.units) sources.push_back(u.source_id);
    return sources;
}

AnswerEnvelope respond(const GroundingContext& ctx, std::span<const memory::QaPair> memory_pairs,
                       const std::string& question, llm::GenerativeModelClient& client, TaskKind task,
                       std::optional<Difficulty> difficulty, const TemplateSet& templates) {
    AnswerEnvelope env;
    env.answer_text = text::trim(generate_answer(build_prompt(ctx, memory_pairs, question, templates), client,
                                                 task, difficulty));
    env.pathway = ctx.branch;
    env.sources = ctx.empty() ? std::vector<std::string>{} : sources_for(ctx);
    env.degraded = ctx.degraded || ctx.empty();
    env.timestamp = std::chrono::time_point_cast<std::chrono::microseconds>(std::chrono::system_clock::now());
    return env;
}

}  // namespace hazardrag::response
