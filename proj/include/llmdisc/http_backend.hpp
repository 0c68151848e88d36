#pragma once

#include <memory>
#include <string>

#include "llmdisc/backend.hpp"

namespace llmdisc {

struct HttpBackendConfig {
    // Origin plus optional path prefix, e.g. "https://api.openai.com/v1"
    // or "http://127.0.0.1:8089/v1". Requests POST to
    // {base_url}/chat/completions.
    std::string base_url = "https://api.openai.com/v1";
    // Empty means: read LLM_API_KEY from the environment.
    std::string api_key;
    int timeout_seconds = 120;
    int max_inflight = 4;
    // Off by default so the request body carries exactly
    // {model, messages, temperature, top_p}.
    bool send_seed = false;
    long seed = 0;
};

// Resolves base_url/api_key from LLM_BASE_URL/LLM_API_KEY where unset.
HttpBackendConfig http_config_from_env(HttpBackendConfig cfg = {});

class HttpBackend : public ChatBackend {
public:
    explicit HttpBackend(HttpBackendConfig cfg);
    ~HttpBackend() override;

    ChatResponse complete(const ChatRequest& request) override;

    // The JSON body sent for a request; exposed for wire-format tests.
    static json request_body(const ChatRequest& request, const HttpBackendConfig& cfg);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace llmdisc
