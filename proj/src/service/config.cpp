#include "hazardrag/service/config.hpp"

#include "hazardrag/error.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

namespace hazardrag::service {
namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw Error(ErrorCode::InvalidConfig, where + " must be an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw Error(ErrorCode::InvalidConfig, "unknown key " + where + "." + key);
    }
}

std::optional<std::filesystem::path> path_at(const json& obj, const char* key, const std::filesystem::path& base) {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    std::filesystem::path p(it->get<std::string>());
    return p.is_absolute() ? p : base / p;
}

ClientConfig client_at(const json& obj, const char* key, ClientConfig defaults, const std::filesystem::path& base,
                       const std::set<std::string>& kinds) {
    const auto it = obj.find(key);
    if (it == obj.end()) return defaults;
    check_keys(*it, {"kind", "url", "model", "api_key_env", "fixture", "dimension", "timeout_seconds"}, key);
    ClientConfig c = defaults;
    c.kind = it->value("kind", c.kind);
    if (!kinds.count(c.kind)) throw Error(ErrorCode::InvalidConfig, std::string(key) + ".kind " + c.kind + " is not supported");
    c.url = it->value("url", c.url);
    c.model = it->value("model", c.model);
    c.api_key_env = it->value("api_key_env", c.api_key_env);
    if (auto f = path_at(*it, "fixture", base)) c.fixture = f;
    c.dimension = it->value("dimension", c.dimension);
    c.timeout_seconds = it->value("timeout_seconds", c.timeout_seconds);
    if ((c.kind == "http") && c.url.empty()) {
        throw Error(ErrorCode::InvalidConfig, std::string(key) + " of kind http needs a url");
    }
    if (c.kind == "fixture" && !c.fixture) {
        throw Error(ErrorCode::InvalidConfig, std::string(key) + " of kind fixture needs a fixture path");
    }
    return c;
}

}  // namespace

std::string ClientConfig::api_key() const {
    if (api_key_env.empty()) return {};
    const char* v = std::getenv(api_key_env.c_str());
    return v ? std::string(v) : std::string();
}

ServiceConfig parse_config(const json& doc, const std::filesystem::path& base) {
    ServiceConfig c;
    try {
        check_keys(doc,
                   {"corpus", "snapshot", "store_schema", "store_db", "join_keys", "template_dir", "gazetteer",
                    "session_dir", "model", "embedder", "reranker", "search", "memory_window", "retrieval",
                    "web_limit", "knowledge_scope", "listen"},
                   "config");
        c.corpus = path_at(doc, "corpus", base);
        c.snapshot = path_at(doc, "snapshot", base);
        c.store_schema = path_at(doc, "store_schema", base);
        c.store_db = path_at(doc, "store_db", base);
        if (c.store_schema && c.store_db) {
            throw Error(ErrorCode::InvalidConfig, "set either store_schema or store_db, not both");
        }
        c.join_keys = doc.value("join_keys", c.join_keys);
        c.template_dir = path_at(doc, "template_dir", base);
        c.gazetteer = path_at(doc, "gazetteer", base);
        c.session_dir = path_at(doc, "session_dir", base);
        c.model = client_at(doc, "model", c.model, base, {"heuristic", "fixture", "http"});
        c.embedder = client_at(doc, "embedder", c.embedder, base, {"hashing", "http"});
        c.reranker = client_at(doc, "reranker", c.reranker, base, {"overlap", "http"});
        c.search = client_at(doc, "search", c.search, base, {"none", "fixture", "http", "duckduckgo"});
        c.memory_window = doc.value("memory_window", c.memory_window);
        if (c.memory_window == 0) throw Error(ErrorCode::InvalidConfig, "memory_window must be positive");
        if (const auto it = doc.find("retrieval"); it != doc.end()) {
            check_keys(*it, {"strategy", "pool_size", "rerank_k", "rerank_batch"}, "retrieval");
            if (it->contains("strategy")) {
                const auto s = retrieval::parse_strategy(it->at("strategy").get<std::string>());
                if (!s) throw Error(ErrorCode::InvalidConfig, "unknown retrieval strategy");
                c.retrieval.strategy = *s;
            }
            c.retrieval.pool_size = it->value("pool_size", c.retrieval.pool_size);
            c.retrieval.rerank_k = it->value("rerank_k", c.retrieval.rerank_k);
            c.retrieval.rerank_batch = it->value("rerank_batch", c.retrieval.rerank_batch);
            retrieval::validate(c.retrieval);
        }
        c.web_limit = doc.value("web_limit", c.web_limit);
        if (c.web_limit == 0) throw Error(ErrorCode::InvalidConfig, "web_limit must be positive");
        if (doc.contains("knowledge_scope")) c.knowledge_scope = doc.at("knowledge_scope").get<std::string>();
        if (const auto it = doc.find("listen"); it != doc.end()) {
            check_keys(*it, {"host", "port"}, "listen");
            c.host = it->value("host", c.host);
            c.port = it->value("port", c.port);
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("config: ") + e.what());
    }
    return c;
}

ServiceConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
    }
    return parse_config(doc, std::filesystem::absolute(path).parent_path());
}

}  // namespace hazardrag::service
