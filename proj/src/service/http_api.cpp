#include "hazardrag/service/http_api.hpp"

#include "hazardrag/text.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

namespace hazardrag::service {
namespace {

using nlohmann::json;

int status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownSession: return 404;
        case ErrorCode::EmptyInput: return 422;
        case ErrorCode::NotReady: return 503;
        case ErrorCode::ClientFailure:
        case ErrorCode::SearchFailure:
        case ErrorCode::EmbedderFailure:
        case ErrorCode::ScorerFailure: return 502;
        default: return 500;
    }
}

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message,
                const std::string& trace_id = {}) {
    json body{{"error", code}, {"message", message}};
    if (!trace_id.empty()) body["trace_id"] = trace_id;
    send_json(res, status, body);
}

}  // namespace

struct ApiServer::Impl {
    explicit Impl(Engine& e) : engine(e) {}
    Engine& engine;
    httplib::Server server;
};

ApiServer::ApiServer(Engine& engine) : impl_(std::make_unique<Impl>(engine)) {
    auto& server = impl_->server;
    Engine& eng = engine;

    server.Post("/sessions", [&eng](const httplib::Request&, httplib::Response& res) {
        send_json(res, 201, {{"session_id", eng.create_session()}});
    });

    server.Post(R"(/sessions/([^/]+)/query)", [&eng](const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1];
        if (!eng.has_session(id)) return send_error(res, 404, "UnknownSession", "unknown session " + id);
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::exception&) {
            return send_error(res, 422, "MalformedBody", "body is not valid JSON");
        }
        if (!body.is_object() || !body.contains("text") || !body["text"].is_string() ||
            text::is_blank(body["text"].get<std::string>())) {
            return send_error(res, 422, "MalformedBody", "body must be {\"text\": <non-empty string>}");
        }
        try {
            const auto response = eng.handle_query(id, body["text"].get<std::string>(), false);
            send_json(res, 200, response.to_json());
        } catch (const TurnError& e) {
            send_error(res, status_for(e.code()), to_string(e.code()), e.what(), e.trace_id());
        } catch (const Error& e) {
            send_error(res, status_for(e.code()), to_string(e.code()), e.what());
        }
    });

    server.Get(R"(/sessions/([^/]+)/history)", [&eng](const httplib::Request& req, httplib::Response& res) {
        try {
            json list = json::array();
            for (const auto& entry : eng.history(req.matches[1])) list.push_back(to_json(entry));
            send_json(res, 200, list);
        } catch (const Error& e) {
            send_error(res, status_for(e.code()), to_string(e.code()), e.what());
        }
    });

    server.Get("/health", [&eng](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, eng.health());
    });

    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            send_error(res, 500, "InternalError", e.what());
        } catch (...) {
            send_error(res, 500, "InternalError", "unknown failure");
        }
    });

    server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
        spdlog::info("{} {} -> {}", req.method, req.path, res.status);
    });
}

ApiServer::~ApiServer() {
    stop();
}

int ApiServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool ApiServer::listen_after_bind() {
    return impl_->server.listen_after_bind();
}

void ApiServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void ApiServer::wait_until_ready() const {
    impl_->server.wait_until_ready();
}

}  // namespace hazardrag::service
