#include "hazardrag/http_json.hpp"

#include <httplib.h>

#include <stdexcept>

namespace hazardrag::http {

Url split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw std::runtime_error("URL without scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

namespace {

httplib::Client make_client(const std::string& scheme_host_port, int timeout_seconds) {
    httplib::Client client(scheme_host_port);
    client.set_connection_timeout(timeout_seconds, 0);
    client.set_read_timeout(timeout_seconds, 0);
    client.set_write_timeout(timeout_seconds, 0);
    client.set_follow_location(true);
    return client;
}

nlohmann::json handle(const httplib::Result& res, const std::string& url) {
    if (!res) {
        throw std::runtime_error("request to " + url + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status < 200 || res->status >= 300) {
        throw std::runtime_error("request to " + url + " returned HTTP " +
                                 std::to_string(res->status));
    }
    try {
        return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::parse_error&) {
        throw std::runtime_error("response from " + url + " is not JSON");
    }
}

}  // namespace

nlohmann::json post_json(const std::string& url, const nlohmann::json& body,
                         const std::map<std::string, std::string>& headers, int timeout_seconds) {
    const auto parts = split_url(url);
    auto client = make_client(parts.scheme_host_port, timeout_seconds);
    httplib::Headers h(headers.begin(), headers.end());
    return handle(client.Post(parts.path, h, body.dump(), "application/json"), url);
}

nlohmann::json get_json(const std::string& url, const std::map<std::string, std::string>& params,
                        const std::map<std::string, std::string>& headers, int timeout_seconds) {
    const auto parts = split_url(url);
    auto client = make_client(parts.scheme_host_port, timeout_seconds);
    httplib::Params p(params.begin(), params.end());
    httplib::Headers h(headers.begin(), headers.end());
    return handle(client.Get(parts.path, p, h), url);
}

}  // namespace hazardrag::http
