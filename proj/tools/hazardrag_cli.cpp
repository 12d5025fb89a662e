#include "hazardrag/eval/grid.hpp"
#include "hazardrag/eval/synthetic.hpp"
#include "hazardrag/retrieval/pipeline.hpp"
#include "hazardrag/service/config.hpp"
#include "hazardrag/service/engine.hpp"
#include "hazardrag/service/http_api.hpp"
#include "hazardrag/text.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <csignal>
#include <fstream>
#include <iostream>

namespace {

using namespace hazardrag;

service::ApiServer* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

int run_index(const std::string& config_path, const std::string& out_override) {
    const auto config = service::load_config(config_path);
    if (!config.corpus) throw Error(ErrorCode::InvalidConfig, "config has no corpus path");
    const std::filesystem::path out = out_override.empty()
                                          ? config.snapshot.value_or(std::filesystem::path("index.snapshot.json"))
                                          : std::filesystem::path(out_override);
    const auto corpus = knowledge::load_corpus(*config.corpus);
    const auto components = service::load_components(config);
    const auto indices = retrieval::build_indices(corpus, *components.components.embedder);
    retrieval::save_snapshot(out, indices);
    std::cout << "indexed " << corpus.count() << " passages -> " << out.string() << "\n";
    if (!indices.vector_error.empty()) std::cout << "vector index skipped: " << indices.vector_error << "\n";
    return 0;
}

void print_trace(const service::QueryResponse& r) {
    std::cout << "trace:      " << r.trace_id << "\n"
              << "rewritten:  " << r.rewritten_query << "\n"
              << "type:       " << to_label(r.query_type) << (r.is_ambiguous ? " (ambiguous)" : "")
              << (r.is_domain_relevant ? "" : " (out of domain)") << "\n"
              << "tags:       disasters=[" << text::join(r.entity_tags.disaster_types, ", ") << "] locations=["
              << text::join(r.entity_tags.locations, ", ") << "]\n"
              << "route:      " << to_label(r.pathway) << " (" << r.route_reason << ")\n";
    if (r.redirect_reason) {
        std::cout << "redirect:   " << *r.redirect_reason << " -> " << to_label(r.evidence_pathway) << "\n";
    }
    if (r.sql) std::cout << "sql:        " << *r.sql << "\n";
    std::cout << "degraded:   " << (r.degraded ? "yes" : "no") << "\n\n" << r.answer_text << "\n";
    if (!r.sources.empty()) {
        std::cout << "\nSources:\n";
        for (const auto& s : r.sources) std::cout << "  - " << s << "\n";
    }
}

int run_query(const std::string& config_path, const std::string& session, bool as_json,
              const std::vector<std::string>& texts) {
    auto engine = service::make_engine(service::load_config(config_path));
    const std::string id = session.empty() ? engine->create_session() : session;
    for (const auto& t : texts) {
        const auto r = engine->handle_query(id, t);
        if (as_json) {
            std::cout << r.to_json().dump(2) << "\n";
        } else {
            std::cout << "> " << t << "\n";
            print_trace(r);
            std::cout << "\n";
        }
    }
    return 0;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (!text::is_blank(cur)) out.push_back(text::trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

struct EvalArgs {
    std::string config;
    std::string mcq;
    std::string oe;
    bool synthetic = false;
    std::uint64_t seed = 7;
    std::string strategies;
    std::string irs;
    std::string ks;
    std::string report;
    std::string judge = "oracle";
};

int run_eval(const EvalArgs& a) {
    eval::GridSpec spec;
    if (!a.strategies.empty()) {
        spec.strategies.clear();
        for (const auto& s : split_list(a.strategies)) {
            const auto parsed = retrieval::parse_strategy(s);
            if (!parsed) throw Error(ErrorCode::InvalidConfig, "unknown strategy " + s);
            spec.strategies.push_back(*parsed);
        }
    }
    auto sizes = [](const std::string& list, std::vector<std::size_t>& target) {
        if (list.empty()) return;
        target.clear();
        for (const auto& v : split_list(list)) target.push_back(static_cast<std::size_t>(std::stoul(v)));
    };
    sizes(a.irs, spec.pool_sizes);
    sizes(a.ks, spec.rerank_depths);

    eval::TaskSet tasks;
    knowledge::Corpus corpus;
    service::LoadedComponents loaded;
    std::shared_ptr<llm::GenerativeModelClient> model;
    if (a.synthetic) {
        auto suite = eval::make_synthetic_suite(a.seed);
        corpus = knowledge::ingest_passages(suite.passages);
        tasks.mcq = std::move(suite.mcq);
        loaded.components.embedder = std::make_shared<retrieval::HashingEmbedder>();
        loaded.components.scorer = std::make_shared<retrieval::TokenOverlapScorer>();
        model = std::make_shared<eval::GoldAwareStubClient>(std::move(suite.keys));
    } else {
        if (a.config.empty()) throw Error(ErrorCode::InvalidConfig, "--config is required unless --synthetic");
        auto config = service::load_config(a.config);
        if (!config.corpus) throw Error(ErrorCode::InvalidConfig, "config has no corpus path");
        config.store_schema.reset();
        config.store_db.reset();
        loaded = service::load_components(config);
        corpus = *loaded.components.corpus;
        model = loaded.components.model;
        if (!a.mcq.empty()) tasks.mcq = eval::load_mcq_items(a.mcq);
        if (!a.oe.empty()) tasks.oe = eval::load_oe_items(a.oe);
    }
    const auto indices = loaded.components.indices ? *loaded.components.indices
                                                   : retrieval::build_indices(corpus, *loaded.components.embedder);
    eval::OracleJudge oracle;
    eval::ModelJudge model_judge(*model);
    eval::KeypointJudge& judge = a.judge == "model" ? static_cast<eval::KeypointJudge&>(model_judge) : oracle;

    const auto result = eval::run_grid(
        {tasks, corpus, indices, {*loaded.components.embedder, *loaded.components.scorer}, *model, judge}, spec);
    std::cout << eval::report_table(result);
    if (!a.report.empty()) {
        std::ofstream out(a.report);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + a.report);
        out << eval::report_json(result).dump(2) << "\n";
        std::cout << "\nreport written to " << a.report << " (" << result.cell_count() << " cells)\n";
    }
    return 0;
}

int run_serve(const std::string& config_path, std::string host, int port) {
    const auto config = service::load_config(config_path);
    if (host.empty()) host = config.host;
    if (port < 0) port = config.port;
    auto engine = service::make_engine(config);
    service::ApiServer server(*engine);
    const int bound = server.bind(host, port);
    if (bound < 0) {
        spdlog::error("cannot bind {}:{}", host, port);
        return 1;
    }
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    spdlog::info("listening on http://{}:{}", host, bound);
    const bool ok = server.listen_after_bind();
    g_server = nullptr;
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-path disaster question answering: index, query, evaluate, serve"};
    app.require_subcommand(1);
    std::string log_level = "warn";
    app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off");

    std::string config;
    std::string out;
    auto* index = app.add_subcommand("index", "Build keyword and vector indices and write a snapshot");
    index->add_option("-c,--config", config, "Configuration file")->required();
    index->add_option("-o,--out", out, "Snapshot path (defaults to the configured snapshot)");

    std::string session;
    bool as_json = false;
    std::vector<std::string> texts;
    auto* query = app.add_subcommand("query", "Answer one or more requests in a single session");
    query->add_option("-c,--config", config, "Configuration file")->required();
    query->add_option("-s,--session", session, "Session id; a fresh session when omitted");
    query->add_flag("--json", as_json, "Print the wire response");
    query->add_option("text", texts, "Request text; several run as consecutive turns")->required();

    EvalArgs eval_args;
    auto* ev = app.add_subcommand("eval", "Run the retrieval configuration sweep");
    ev->add_option("-c,--config", eval_args.config, "Configuration file");
    ev->add_option("--mcq", eval_args.mcq, "MCQ task file (JSON array)");
    ev->add_option("--oe", eval_args.oe, "Open-ended task file (JSON array)");
    ev->add_flag("--synthetic", eval_args.synthetic, "Use the built-in synthetic corpus, items and stub model");
    ev->add_option("--seed", eval_args.seed, "Seed for --synthetic");
    ev->add_option("--strategies", eval_args.strategies, "Comma list of keyword,vector,hybrid");
    ev->add_option("--ir", eval_args.irs, "Comma list of candidate pool sizes");
    ev->add_option("--k", eval_args.ks, "Comma list of rerank depths");
    ev->add_option("--report", eval_args.report, "Write the JSON report here");
    ev->add_option("--judge", eval_args.judge, "Keypoint judge: oracle|model")->check(CLI::IsMember({"oracle", "model"}));

    std::string host;
    int port = -1;
    auto* serve = app.add_subcommand("serve", "Start the HTTP service");
    serve->add_option("-c,--config", config, "Configuration file")->required();
    serve->add_option("--host", host, "Listen address (overrides config)");
    serve->add_option("--port", port, "Listen port (overrides config)");

    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(spdlog::level::from_str(serve->parsed() && log_level == "warn" ? "info" : log_level));

    try {
        if (index->parsed()) return run_index(config, out);
        if (query->parsed()) return run_query(config, session, as_json, texts);
        if (ev->parsed()) return run_eval(eval_args);
        if (serve->parsed()) return run_serve(config, host, port);
    } catch (const service::TurnError& e) {
        std::cerr << "error [" << to_string(e.code()) << ", " << e.trace_id() << "]: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
