#pragma once

#include "hazardrag/retrieval/types.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hazardrag::service {

// Endpoint settings for one pluggable client. Secrets are never stored in
// the file: `api_key_env` names the environment variable that holds them.
struct ClientConfig {
    std::string kind;  // model: heuristic|fixture|http; embedder: hashing|http;
                       // reranker: overlap|http; search: fixture|http|duckduckgo|none
    std::string url;
    std::string model;
    std::string api_key_env;
    std::optional<std::filesystem::path> fixture;
    std::size_t dimension = 256;
    int timeout_seconds = 30;

    std::string api_key() const;  // empty when unset

    static ClientConfig of_kind(std::string kind) {
        ClientConfig c;
        c.kind = std::move(kind);
        return c;
    }
};

struct ServiceConfig {
    std::optional<std::filesystem::path> corpus;
    std::optional<std::filesystem::path> snapshot;
    std::optional<std::filesystem::path> store_schema;  // schema JSON with CSV files
    std::optional<std::filesystem::path> store_db;      // or an SQLite database
    std::vector<std::string> join_keys;                 // for store_db
    std::optional<std::filesystem::path> template_dir;
    std::optional<std::filesystem::path> gazetteer;
    std::optional<std::filesystem::path> session_dir;

    ClientConfig model = ClientConfig::of_kind("heuristic");
    ClientConfig embedder = ClientConfig::of_kind("hashing");
    ClientConfig reranker = ClientConfig::of_kind("overlap");
    ClientConfig search = ClientConfig::of_kind("none");

    std::size_t memory_window = 10;
    retrieval::RetrievalConfig retrieval;
    std::size_t web_limit = 10;
    std::optional<std::string> knowledge_scope;

    std::string host = "127.0.0.1";
    int port = 8080;
};

/// Relative paths resolve against `base_dir`. Unknown keys are rejected so
/// typos do not silently fall back to defaults. Error(InvalidConfig).
ServiceConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
ServiceConfig load_config(const std::filesystem::path& path);

}  // namespace hazardrag::service
