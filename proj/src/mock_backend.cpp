#include "llmdisc/mock_backend.hpp"

#include <fstream>

#include "llmdisc/errors.hpp"

namespace llmdisc {

MockScript MockScript::parse(const json& j) {
    MockScript script;
    if (!j.is_object()) throw ParseError("mock script: top level must be an object");
    if (j.contains("default")) {
        if (!j.at("default").is_string())
            throw ParseError("mock script: 'default' must be a string");
        script.default_response = j.at("default").get<std::string>();
    }
    if (!j.contains("routes")) return script;
    if (!j.at("routes").is_array())
        throw ParseError("mock script: 'routes' must be an array");
    int idx = 0;
    for (const json& r : j.at("routes")) {
        if (!r.is_object() || !r.contains("response") || !r.at("response").is_string())
            throw ParseError("mock script: route " + std::to_string(idx) +
                             " needs a string 'response'");
        std::string response = r.at("response").get<std::string>();
        if (r.contains("tag")) {
            script.by_probe[r.at("tag").get<std::string>()] = std::move(response);
        } else if (r.contains("agent") && r.contains("round")) {
            script.by_cell[{r.at("agent").get<int>(), r.at("round").get<int>()}] =
                std::move(response);
        } else {
            throw ParseError("mock script: route " + std::to_string(idx) +
                             " needs either 'tag' or 'agent'+'round'");
        }
        ++idx;
    }
    return script;
}

MockScript MockScript::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open mock script");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": invalid JSON: " + e.what());
    }
    return parse(j);
}

const std::string& mock_route(const MockScript& script, const RouteTag& tag,
                              bool* matched) {
    if (matched) *matched = true;
    if (!tag.probe.empty()) {
        auto it = script.by_probe.find(tag.probe);
        if (it != script.by_probe.end()) return it->second;
    }
    if (tag.agent >= 0 && tag.round >= 0) {
        auto it = script.by_cell.find({tag.agent, tag.round});
        if (it != script.by_cell.end()) return it->second;
    }
    if (matched) *matched = false;
    return script.default_response;
}

ChatResponse MockBackend::complete(const ChatRequest& request) {
    call_count_.fetch_add(1);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        requests_.push_back(request);
    }
    bool matched = false;
    const std::string& text = mock_route(script_, request.tag, &matched);
    if (!matched) unmatched_count_.fetch_add(1);
    ChatResponse resp;
    resp.content = text;
    resp.model = request.model;
    return resp;
}

std::vector<ChatRequest> MockBackend::requests() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return requests_;
}

}  // namespace llmdisc
