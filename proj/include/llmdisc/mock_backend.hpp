#pragma once

#include <atomic>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "llmdisc/backend.hpp"

namespace llmdisc {

// Scripted responses keyed by routing tag. File format:
//   {"default": "...",
//    "routes": [{"agent": 0, "round": 1, "response": "..."},
//               {"tag": "judge:originality:a0:i0:r0:t0", "response": "..."}]}
struct MockScript {
    std::string default_response = "1. idea one\n2. idea two\n3. idea three";
    std::map<std::pair<int, int>, std::string> by_cell;
    std::map<std::string, std::string> by_probe;

    static MockScript parse(const json& j);
    static MockScript load(const std::string& path);
};

// Deterministic in-process backend: the reply depends only on the request's
// routing tag, never on timing or call order.
class MockBackend : public ChatBackend {
public:
    MockBackend() = default;
    explicit MockBackend(MockScript script) : script_(std::move(script)) {}

    ChatResponse complete(const ChatRequest& request) override;

    long call_count() const { return call_count_.load(); }
    long unmatched_count() const { return unmatched_count_.load(); }
    std::vector<ChatRequest> requests() const;

private:
    MockScript script_;
    std::atomic<long> call_count_{0};
    std::atomic<long> unmatched_count_{0};
    mutable std::mutex mutex_;
    std::vector<ChatRequest> requests_;
};

// Resolves the scripted response for a tag: probe match first, then the
// (agent, round) cell, else the script default (counted as unmatched).
const std::string& mock_route(const MockScript& script, const RouteTag& tag,
                              bool* matched = nullptr);

}  // namespace llmdisc
