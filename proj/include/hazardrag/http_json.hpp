#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <string>

namespace hazardrag::http {

struct Url {
    std::string scheme_host_port;  // "https://host:443"
    std::string path;              // "/v1/x"
};

Url split_url(const std::string& url);

// Both throw std::runtime_error on transport errors, non-2xx status or a
// body that is not JSON.
nlohmann::json post_json(const std::string& url, const nlohmann::json& body,
                         const std::map<std::string, std::string>& headers, int timeout_seconds);

nlohmann::json get_json(const std::string& url, const std::map<std::string, std::string>& params,
                        const std::map<std::string, std::string>& headers, int timeout_seconds);

}  // namespace hazardrag::http
