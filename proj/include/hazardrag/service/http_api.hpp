#pragma once

#include "hazardrag/service/engine.hpp"

#include <memory>
#include <string>

namespace hazardrag::service {

/// JSON over HTTP:
///   POST /sessions                -> 201 {"session_id"}
///   POST /sessions/{id}/query     {"text"} -> 200 QueryResponse
///   GET  /sessions/{id}/history   -> 200 [MemoryEntry...], oldest first
///   GET  /health                  -> 200 status and index state
/// Errors are {"error", "message", "trace_id"?}: 404 unknown session, 422
/// malformed body, 503 indices not loaded, 502 upstream client failure, 500
/// otherwise.
class ApiServer {
public:
    explicit ApiServer(Engine& engine);
    ~ApiServer();
    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    /// Binds to `port`, or to a free port when 0. Returns the bound port, or
    /// -1 on failure.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    bool listen_after_bind();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace hazardrag::service
