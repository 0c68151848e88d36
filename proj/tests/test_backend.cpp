#include <atomic>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "llmdisc/errors.hpp"
#include "llmdisc/http_backend.hpp"
#include "llmdisc/mock_backend.hpp"
#include "test_util.hpp"

using namespace llmdisc;

namespace {

ChatRequest tagged(int agent, int round, const std::string& probe = "") {
    ChatRequest req;
    req.model = "test-model";
    req.messages = {{Speaker::user, "hello"}};
    req.tag = RouteTag{agent, round, probe};
    return req;
}

// Fails with the given error N times, then delegates to a fixed response.
class FlakyBackend : public ChatBackend {
public:
    FlakyBackend(int failures, int status, bool retryable)
        : failures_(failures), status_(status), retryable_(retryable) {}

    ChatResponse complete(const ChatRequest&) override {
        calls_.fetch_add(1);
        if (failed_.fetch_add(1) < failures_)
            throw BackendError("synthetic failure", status_, retryable_);
        ChatResponse r;
        r.content = "recovered";
        return r;
    }

    int calls() const { return calls_.load(); }

private:
    int failures_;
    int status_;
    bool retryable_;
    std::atomic<int> failed_{0};
    std::atomic<int> calls_{0};
};

RetryPolicy fast_retry(int attempts = 3) {
    RetryPolicy p;
    p.max_attempts = attempts;
    p.base_delay_ms = 0.0;
    return p;
}

}  // namespace

TEST_CASE("mock routing prefers probe, then cell, then default") {
    MockScript script;
    script.default_response = "default";
    script.by_cell[{0, 1}] = "cell-0-1";
    script.by_probe["special"] = "probed";

    bool matched = false;
    CHECK(mock_route(script, RouteTag{0, 1, "special"}, &matched) == "probed");
    CHECK(matched);
    CHECK(mock_route(script, RouteTag{0, 1, ""}, &matched) == "cell-0-1");
    CHECK(matched);
    CHECK(mock_route(script, RouteTag{0, 1, "unknown-probe"}, &matched) == "cell-0-1");
    CHECK(matched);
    CHECK(mock_route(script, RouteTag{2, 1, ""}, &matched) == "default");
    CHECK(!matched);
    CHECK(mock_route(script, RouteTag{-1, -1, ""}, &matched) == "default");
    CHECK(!matched);
}

TEST_CASE("mock backend records requests and counts misses") {
    MockScript script;
    script.by_cell[{1, 2}] = "hit";
    MockBackend backend(script);

    CHECK(backend.complete(tagged(1, 2)).content == "hit");
    CHECK(backend.complete(tagged(9, 9)).content == script.default_response);
    CHECK(backend.call_count() == 2);
    CHECK(backend.unmatched_count() == 1);

    std::vector<ChatRequest> reqs = backend.requests();
    REQUIRE(reqs.size() == 2);
    CHECK(reqs[0].tag == RouteTag{1, 2, ""});
    CHECK(reqs[1].tag == RouteTag{9, 9, ""});
    CHECK(reqs[0].messages.size() == 1);
}

TEST_CASE("mock backend is deterministic under concurrency") {
    MockScript script;
    for (int i = 0; i < 20; ++i)
        script.by_cell[{i, 1}] = "agent-" + std::to_string(i);
    MockBackend backend(script);

    std::vector<std::string> got(20);
    std::vector<std::thread> threads;
    for (int i = 0; i < 20; ++i)
        threads.emplace_back(
            [&, i] { got[i] = backend.complete(tagged(i, 1)).content; });
    for (std::thread& t : threads) t.join();

    for (int i = 0; i < 20; ++i)
        CHECK(got[i] == "agent-" + std::to_string(i));
    CHECK(backend.call_count() == 20);
    CHECK(backend.unmatched_count() == 0);
}

TEST_CASE("mock script parsing validates its shape") {
    json good = {{"default", "d"},
                 {"routes", json::array({json{{"agent", 0}, {"round", 1}, {"response", "x"}},
                                         json{{"tag", "p"}, {"response", "y"}}})}};
    MockScript s = MockScript::parse(good);
    CHECK(s.default_response == "d");
    CHECK(s.by_cell.at({0, 1}) == "x");
    CHECK(s.by_probe.at("p") == "y");

    CHECK_THROWS_AS(MockScript::parse(json::array()), ParseError);
    CHECK_THROWS_AS(MockScript::parse(json{{"default", 5}}), ParseError);
    json no_response = {{"routes", json::array({json{{"agent", 0}, {"round", 1}}})}};
    CHECK_THROWS_WITH_AS(MockScript::parse(no_response),
                         doctest::Contains("route 0"), ParseError);
    json no_key = {{"routes", json::array({json{{"response", "x"}}})}};
    CHECK_THROWS_AS(MockScript::parse(no_key), ParseError);

    testutil::TempDir tmp;
    testutil::write_file(tmp.sub("script.json"), good.dump());
    CHECK(MockScript::load(tmp.sub("script.json")).by_probe.at("p") == "y");
    CHECK_THROWS_AS(MockScript::load(tmp.sub("absent.json")), IoError);
    testutil::write_file(tmp.sub("bad.json"), "{nope");
    CHECK_THROWS_AS(MockScript::load(tmp.sub("bad.json")), ParseError);
}

TEST_CASE("retry policy retries retryable failures with backoff") {
    SUBCASE("recovers within budget") {
        FlakyBackend flaky(2, 503, true);
        ChatResponse r = complete_with_retry(flaky, tagged(0, 1), fast_retry());
        CHECK(r.content == "recovered");
        CHECK(flaky.calls() == 3);
    }
    SUBCASE("non-retryable failures propagate immediately") {
        FlakyBackend fatal(5, 400, false);
        CHECK_THROWS_AS(complete_with_retry(fatal, tagged(0, 1), fast_retry()),
                        BackendError);
        CHECK(fatal.calls() == 1);
    }
    SUBCASE("budget exhaustion reports attempts and last error") {
        FlakyBackend flaky(99, 429, true);
        try {
            complete_with_retry(flaky, tagged(0, 1), fast_retry(4));
            FAIL("expected RetryExhaustedError");
        } catch (const RetryExhaustedError& e) {
            CHECK(e.attempts() == 4);
            CHECK(testutil::contains(e.last_error(), "synthetic failure"));
        }
        CHECK(flaky.calls() == 4);
    }
    SUBCASE("zero attempts is a config error") {
        FlakyBackend flaky(0, 200, true);
        CHECK_THROWS_AS(complete_with_retry(flaky, tagged(0, 1), fast_retry(0)),
                        ConfigError);
    }
}

TEST_CASE("inflight limiter bounds concurrency") {
    InflightLimiter limiter(2);
    std::atomic<int> current{0};
    std::atomic<int> peak{0};
    std::vector<std::thread> threads;
    for (int i = 0; i < 8; ++i)
        threads.emplace_back([&] {
            InflightLimiter::Guard guard(limiter);
            int now = current.fetch_add(1) + 1;
            int seen = peak.load();
            while (now > seen && !peak.compare_exchange_weak(seen, now)) {
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(5));
            current.fetch_sub(1);
        });
    for (std::thread& t : threads) t.join();
    CHECK(peak.load() <= 2);
    CHECK(peak.load() >= 1);
    CHECK_THROWS_AS(InflightLimiter(0), ConfigError);
}

namespace {

// Minimal OpenAI-compatible stub server for wire-format tests.
struct StubServer {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    std::atomic<int> hits{0};
    std::mutex mutex;
    std::vector<json> bodies;
    std::vector<std::string> auth_headers;

    explicit StubServer(const std::function<void(const httplib::Request&,
                                                 httplib::Response&, int)>& handler) {
        server.Post("/v1/chat/completions",
                    [this, handler](const httplib::Request& req, httplib::Response& res) {
                        int n = hits.fetch_add(1);
                        {
                            std::lock_guard<std::mutex> lock(mutex);
                            bodies.push_back(json::parse(req.body));
                            auth_headers.push_back(req.get_header_value("Authorization"));
                        }
                        handler(req, res, n);
                    });
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~StubServer() {
        server.stop();
        thread.join();
    }

    HttpBackendConfig config() const {
        HttpBackendConfig cfg;
        cfg.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
        cfg.api_key = "test-key";
        cfg.timeout_seconds = 5;
        return cfg;
    }
};

void reply_ok(httplib::Response& res, const std::string& content) {
    json body = {{"id", "chatcmpl-1"},
                 {"model", "stub-model"},
                 {"choices",
                  json::array({json{{"index", 0},
                                    {"message", json{{"role", "assistant"},
                                                     {"content", content}}},
                                    {"finish_reason", "stop"}}})},
                 {"usage", json{{"prompt_tokens", 7}, {"completion_tokens", 3}}}};
    res.set_content(body.dump(), "application/json");
}

}  // namespace

TEST_CASE("http backend speaks the chat-completions wire format") {
    StubServer stub([](const httplib::Request&, httplib::Response& res, int) {
        reply_ok(res, "stubbed reply");
    });
    HttpBackend backend(stub.config());

    ChatRequest req;
    req.model = "test-model";
    req.messages = {{Speaker::user, "first"}, {Speaker::assistant, "second"},
                    {Speaker::user, "third"}};
    req.temperature = 0.7;
    req.top_p = 0.9;
    ChatResponse resp = backend.complete(req);

    CHECK(resp.content == "stubbed reply");
    CHECK(resp.model == "stub-model");
    CHECK(resp.prompt_tokens == 7);
    CHECK(resp.completion_tokens == 3);

    REQUIRE(stub.bodies.size() == 1);
    const json& body = stub.bodies[0];
    CHECK(body.size() == 4);  // model, messages, temperature, top_p — nothing else
    CHECK(body.at("model") == "test-model");
    CHECK(body.at("temperature") == doctest::Approx(0.7));
    CHECK(body.at("top_p") == doctest::Approx(0.9));
    REQUIRE(body.at("messages").size() == 3);
    CHECK(body.at("messages")[0] == json{{"role", "user"}, {"content", "first"}});
    CHECK(body.at("messages")[1] ==
          json{{"role", "assistant"}, {"content", "second"}});
    CHECK(stub.auth_headers[0] == "Bearer test-key");
}

TEST_CASE("http backend retries 429/5xx and fails fast on other 4xx") {
    SUBCASE("429 then 500 then success") {
        StubServer stub([](const httplib::Request&, httplib::Response& res, int n) {
            if (n == 0) {
                res.status = 429;
                res.set_content("slow down", "text/plain");
            } else if (n == 1) {
                res.status = 500;
                res.set_content("oops", "text/plain");
            } else {
                reply_ok(res, "third time lucky");
            }
        });
        HttpBackend backend(stub.config());
        ChatResponse r = complete_with_retry(backend, tagged(0, 1), fast_retry());
        CHECK(r.content == "third time lucky");
        CHECK(stub.hits.load() == 3);
    }
    SUBCASE("400 is fatal on the first try") {
        StubServer stub([](const httplib::Request&, httplib::Response& res, int) {
            res.status = 400;
            res.set_content("bad request", "text/plain");
        });
        HttpBackend backend(stub.config());
        try {
            complete_with_retry(backend, tagged(0, 1), fast_retry());
            FAIL("expected BackendError");
        } catch (const BackendError& e) {
            CHECK(e.status() == 400);
            CHECK(!e.retryable());
        }
        CHECK(stub.hits.load() == 1);
    }
    SUBCASE("persistent 503 exhausts the retry budget") {
        StubServer stub([](const httplib::Request&, httplib::Response& res, int) {
            res.status = 503;
        });
        HttpBackend backend(stub.config());
        CHECK_THROWS_AS(complete_with_retry(backend, tagged(0, 1), fast_retry(2)),
                        RetryExhaustedError);
        CHECK(stub.hits.load() == 2);
    }
    SUBCASE("malformed success body is fatal") {
        StubServer stub([](const httplib::Request&, httplib::Response& res, int) {
            res.set_content("{\"choices\": []}", "application/json");
        });
        HttpBackend backend(stub.config());
        try {
            backend.complete(tagged(0, 1));
            FAIL("expected BackendError");
        } catch (const BackendError& e) {
            CHECK(!e.retryable());
        }
    }
    SUBCASE("connection refused is retryable transport error") {
        HttpBackendConfig cfg;
        cfg.base_url = "http://127.0.0.1:1/v1";  // nothing listens here
        cfg.api_key = "k";
        cfg.timeout_seconds = 1;
        HttpBackend backend(cfg);
        try {
            backend.complete(tagged(0, 1));
            FAIL("expected BackendError");
        } catch (const BackendError& e) {
            CHECK(e.status() == 0);
            CHECK(e.retryable());
        }
    }
}

TEST_CASE("request body carries a seed only when opted in") {
    ChatRequest req;
    req.model = "m";
    req.messages = {{Speaker::user, "q"}};
    HttpBackendConfig cfg;
    json plain = HttpBackend::request_body(req, cfg);
    CHECK(plain.size() == 4);
    CHECK(!plain.contains("seed"));

    cfg.send_seed = true;
    cfg.seed = 42;
    json seeded = HttpBackend::request_body(req, cfg);
    CHECK(seeded.size() == 5);
    CHECK(seeded.at("seed") == 42);
}

TEST_CASE("http config reads environment fallbacks") {
    // Only exercises the no-env path deterministically: explicit values win.
    HttpBackendConfig cfg;
    cfg.base_url = "http://example.test/v1";
    cfg.api_key = "explicit";
    HttpBackendConfig resolved = http_config_from_env(cfg);
    CHECK(resolved.base_url == "http://example.test/v1");
    CHECK(resolved.api_key == "explicit");
}
