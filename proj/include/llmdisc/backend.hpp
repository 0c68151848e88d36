#pragma once

#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "llmdisc/types.hpp"

namespace llmdisc {

// Side-channel routing tag. Never rendered into prompt text; the mock
// backend keys scripted responses on it, real backends ignore it.
struct RouteTag {
    int agent = -1;
    int round = -1;
    std::string probe;

    bool operator==(const RouteTag&) const = default;
};

struct ChatRequest {
    std::string model;
    std::vector<ChatMessage> messages;
    double temperature = 1.0;
    double top_p = 1.0;
    RouteTag tag;

    bool operator==(const ChatRequest&) const = default;
};

struct ChatResponse {
    std::string content;
    std::string model;
    long prompt_tokens = 0;
    long completion_tokens = 0;
    double latency_ms = 0.0;
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

struct RetryPolicy {
    int max_attempts = 3;
    double base_delay_ms = 250.0;
    // Sleep before attempt k+1 is base * 2^k * uniform(0.5, 1.5).
    double jitter_min = 0.5;
    double jitter_max = 1.5;
};

// Retries retryable backend failures with exponential backoff and jitter;
// non-retryable failures propagate immediately. Throws RetryExhaustedError
// once max_attempts requests have failed.
ChatResponse complete_with_retry(ChatBackend& backend, const ChatRequest& request,
                                 const RetryPolicy& policy = {});

// Counting semaphore bounding concurrent in-flight requests.
class InflightLimiter {
public:
    explicit InflightLimiter(int limit);

    void acquire();
    void release();

    class Guard {
    public:
        explicit Guard(InflightLimiter& limiter) : limiter_(limiter) {
            limiter_.acquire();
        }
        ~Guard() { limiter_.release(); }
        Guard(const Guard&) = delete;
        Guard& operator=(const Guard&) = delete;

    private:
        InflightLimiter& limiter_;
    };

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int available_;
};

}  // namespace llmdisc
