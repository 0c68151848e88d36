#include "llmdisc/backend.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <thread>

#include "llmdisc/errors.hpp"

namespace llmdisc {

ChatResponse complete_with_retry(ChatBackend& backend, const ChatRequest& request,
                                 const RetryPolicy& policy) {
    if (policy.max_attempts < 1)
        throw ConfigError("retry policy needs at least one attempt");
    thread_local std::mt19937 rng{std::random_device{}()};
    std::string last_error;
    for (int attempt = 0; attempt < policy.max_attempts; ++attempt) {
        try {
            return backend.complete(request);
        } catch (const BackendError& e) {
            if (!e.retryable()) throw;
            last_error = e.what();
        }
        if (attempt + 1 < policy.max_attempts) {
            std::uniform_real_distribution<double> jitter(policy.jitter_min,
                                                          policy.jitter_max);
            double delay =
                policy.base_delay_ms * std::pow(2.0, attempt) * jitter(rng);
            std::this_thread::sleep_for(
                std::chrono::duration<double, std::milli>(delay));
        }
    }
    throw RetryExhaustedError(policy.max_attempts, last_error);
}

InflightLimiter::InflightLimiter(int limit) : available_(limit) {
    if (limit < 1) throw ConfigError("in-flight limit must be >= 1");
}

void InflightLimiter::acquire() {
    std::unique_lock<std::mutex> lock(mutex_);
    cv_.wait(lock, [this] { return available_ > 0; });
    --available_;
}

void InflightLimiter::release() {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        ++available_;
    }
    cv_.notify_one();
}

}  // namespace llmdisc
