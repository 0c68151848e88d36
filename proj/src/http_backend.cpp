#include "llmdisc/http_backend.hpp"

#include <chrono>
#include <cstdlib>

#include "httplib.h"
#include "llmdisc/errors.hpp"

namespace llmdisc {

namespace {

struct SplitUrl {
    std::string origin;       // scheme://host[:port]
    std::string path_prefix;  // leading path with no trailing slash
};

SplitUrl split_base_url(const std::string& base_url) {
    auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("base url must start with http:// or https://: " +
                          base_url);
    auto path_start = base_url.find('/', scheme_end + 3);
    SplitUrl out;
    if (path_start == std::string::npos) {
        out.origin = base_url;
    } else {
        out.origin = base_url.substr(0, path_start);
        out.path_prefix = base_url.substr(path_start);
    }
    while (!out.path_prefix.empty() && out.path_prefix.back() == '/')
        out.path_prefix.pop_back();
    return out;
}

}  // namespace

HttpBackendConfig http_config_from_env(HttpBackendConfig cfg) {
    if (cfg.api_key.empty()) {
        if (const char* key = std::getenv("LLM_API_KEY")) cfg.api_key = key;
    }
    if (const char* base = std::getenv("LLM_BASE_URL")) {
        if (cfg.base_url == HttpBackendConfig{}.base_url && *base)
            cfg.base_url = base;
    }
    return cfg;
}

json HttpBackend::request_body(const ChatRequest& request,
                               const HttpBackendConfig& cfg) {
    json messages = json::array();
    for (const ChatMessage& m : request.messages)
        messages.push_back(
            {{"role", to_string(m.speaker)}, {"content", m.content}});
    json body{{"model", request.model},
              {"messages", std::move(messages)},
              {"temperature", request.temperature},
              {"top_p", request.top_p}};
    if (cfg.send_seed) body["seed"] = cfg.seed;
    return body;
}

struct HttpBackend::Impl {
    HttpBackendConfig cfg;
    SplitUrl url;
    httplib::Client client;
    InflightLimiter limiter;

    Impl(HttpBackendConfig c, SplitUrl u)
        : cfg(std::move(c)), url(std::move(u)), client(url.origin),
          limiter(cfg.max_inflight) {
        client.set_connection_timeout(cfg.timeout_seconds);
        client.set_read_timeout(cfg.timeout_seconds);
        client.set_write_timeout(cfg.timeout_seconds);
        if (!cfg.api_key.empty()) client.set_bearer_token_auth(cfg.api_key);
    }
};

HttpBackend::HttpBackend(HttpBackendConfig cfg) {
    cfg = http_config_from_env(std::move(cfg));
    SplitUrl url = split_base_url(cfg.base_url);
    impl_ = std::make_unique<Impl>(std::move(cfg), std::move(url));
}

HttpBackend::~HttpBackend() = default;

ChatResponse HttpBackend::complete(const ChatRequest& request) {
    if (request.messages.empty())
        throw ConfigError("chat request needs at least one message");
    InflightLimiter::Guard guard(impl_->limiter);
    std::string path = impl_->url.path_prefix + "/chat/completions";
    std::string body = request_body(request, impl_->cfg).dump();
    auto start = std::chrono::steady_clock::now();
    httplib::Result res = impl_->client.Post(path, body, "application/json");
    double latency =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - start)
            .count();
    if (!res)
        throw BackendError("transport error: " + httplib::to_string(res.error()),
                           0, true);
    if (res->status != 200) {
        bool retryable = res->status == 429 || res->status >= 500;
        throw BackendError("http status " + std::to_string(res->status) + ": " +
                           res->body, res->status, retryable);
    }
    json j;
    try {
        j = json::parse(res->body);
    } catch (const json::parse_error& e) {
        throw BackendError(std::string("malformed response body: ") + e.what(),
                           res->status, false);
    }
    ChatResponse out;
    try {
        out.content =
            j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw BackendError(std::string("response missing choices[0].message."
                                       "content: ") + e.what(),
                           res->status, false);
    }
    out.model = j.value("model", request.model);
    if (j.contains("usage") && j.at("usage").is_object()) {
        const json& u = j.at("usage");
        out.prompt_tokens = u.value("prompt_tokens", 0L);
        out.completion_tokens = u.value("completion_tokens", 0L);
    }
    out.latency_ms = latency;
    return out;
}

}  // namespace llmdisc
