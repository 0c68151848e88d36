#include "llmdisc/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "llmdisc/errors.hpp"

namespace llmdisc {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool whitespace_only(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

std::string to_string(Benchmark b) {
    switch (b) {
        case Benchmark::aut: return "AUT";
        case Benchmark::instances: return "Instances";
        case Benchmark::similarities: return "Similarities";
        case Benchmark::scientific: return "Scientific";
    }
    throw ConfigError("unknown benchmark value");
}

Benchmark benchmark_from_string(const std::string& s) {
    std::string k = lower(s);
    if (k == "aut") return Benchmark::aut;
    if (k == "instances") return Benchmark::instances;
    if (k == "similarities") return Benchmark::similarities;
    if (k == "scientific") return Benchmark::scientific;
    throw ParseError("unknown benchmark: " + s);
}

void validate(const BenchmarkTask& task) {
    if (task.text.empty() || whitespace_only(task.text))
        throw ConfigError("task text must be non-empty");
}

std::string to_string(Speaker s) {
    switch (s) {
        case Speaker::system: return "system";
        case Speaker::user: return "user";
        case Speaker::assistant: return "assistant";
    }
    throw ConfigError("unknown speaker value");
}

Speaker speaker_from_string(const std::string& s) {
    if (s == "system") return Speaker::system;
    if (s == "user") return Speaker::user;
    if (s == "assistant") return Speaker::assistant;
    throw ParseError("unknown speaker: " + s);
}

void validate(const RoleCard& card) {
    if (card.agent_role.empty()) throw ParseError("role card: empty agent_role");
    if (card.agent_speciality.empty())
        throw ParseError("role card: empty agent_speciality");
    if (card.agent_role_prompt.empty())
        throw ParseError("role card: empty agent_role_prompt");
}

void validate(const AgentState& state) {
    if (state.agent_index < 0) throw ConfigError("agent_index must be >= 0");
    for (size_t i = 0; i < state.history.size(); ++i) {
        Speaker expected = (i % 2 == 0) ? Speaker::user : Speaker::assistant;
        if (state.history[i].speaker != expected)
            throw ConfigError("agent history must alternate user/assistant "
                              "starting with user (position " +
                              std::to_string(i) + ")");
    }
}

std::string to_string(Method m) {
    switch (m) {
        case Method::discussion: return "discussion";
        case Method::debate: return "debate";
        case Method::single: return "single";
        case Method::bts: return "bts";
    }
    throw ConfigError("unknown method value");
}

Method method_from_string(const std::string& s) {
    std::string k = lower(s);
    if (k == "discussion") return Method::discussion;
    if (k == "debate") return Method::debate;
    if (k == "single") return Method::single;
    if (k == "bts") return Method::bts;
    throw ParseError("unknown method: " + s);
}

std::string to_string(SingleStrategy s) {
    switch (s) {
        case SingleStrategy::zero_shot: return "zero_shot";
        case SingleStrategy::few_shot: return "few_shot";
        case SingleStrategy::cot: return "cot";
        case SingleStrategy::stimuli: return "stimuli";
        case SingleStrategy::deep_breath: return "deep_breath";
    }
    throw ConfigError("unknown strategy value");
}

SingleStrategy single_strategy_from_string(const std::string& s) {
    std::string k = lower(s);
    std::replace(k.begin(), k.end(), '-', '_');
    if (k == "zero_shot") return SingleStrategy::zero_shot;
    if (k == "few_shot") return SingleStrategy::few_shot;
    if (k == "cot") return SingleStrategy::cot;
    if (k == "stimuli") return SingleStrategy::stimuli;
    if (k == "deep_breath") return SingleStrategy::deep_breath;
    throw ParseError("unknown single-agent strategy: " + s);
}

std::string to_string(BackendKind k) {
    switch (k) {
        case BackendKind::openai_compatible: return "openai_compatible";
        case BackendKind::mock: return "mock";
    }
    throw ConfigError("unknown backend kind");
}

BackendKind backend_kind_from_string(const std::string& s) {
    std::string k = lower(s);
    std::replace(k.begin(), k.end(), '-', '_');
    if (k == "openai_compatible" || k == "openai") return BackendKind::openai_compatible;
    if (k == "mock") return BackendKind::mock;
    throw ParseError("unknown backend kind: " + s);
}

RunConfig normalized(RunConfig cfg) {
    if (cfg.method == Method::single) {
        cfg.agents = 1;
        cfg.rounds = 1;
    } else if (cfg.method == Method::bts) {
        cfg.agents = 1;
        cfg.rounds = 2;
    }
    return cfg;
}

void validate(const RunConfig& cfg) {
    if (cfg.rounds < 1) throw ConfigError("rounds must be >= 1");
    if (cfg.agents < 1) throw ConfigError("agents must be >= 1");
    if (cfg.method == Method::discussion || cfg.method == Method::debate) {
        if (cfg.agents < 2)
            throw ConfigError(to_string(cfg.method) + " requires at least 2 agents");
        if (cfg.rounds < 2)
            throw ConfigError(to_string(cfg.method) +
                              " requires at least 2 rounds (a convergence round)");
    }
    if (cfg.method == Method::single) {
        if (cfg.agents != 1 || cfg.rounds != 1)
            throw ConfigError("single method requires agents=1, rounds=1");
        if (!cfg.single_strategy)
            throw ConfigError("single method requires a strategy");
    }
    if (cfg.method != Method::single && cfg.single_strategy)
        throw ConfigError("strategy is only valid with the single method");
    if (cfg.method == Method::bts) {
        if (cfg.agents != 1 || cfg.rounds != 2)
            throw ConfigError("bts method requires agents=1, rounds=2");
        if (cfg.bts_k < 1) throw ConfigError("bts selection size must be >= 1");
        if (cfg.bts_candidates < cfg.bts_k)
            throw ConfigError("bts candidate count must be >= selection size");
    }
    if (cfg.temperature < 0.0 || cfg.temperature > 2.0)
        throw ConfigError("temperature must be in [0, 2]");
    if (cfg.top_p <= 0.0 || cfg.top_p > 1.0)
        throw ConfigError("top_p must be in (0, 1]");
    if (cfg.model.empty()) throw ConfigError("model must be non-empty");
    if (cfg.prompt_variant < 1 || cfg.prompt_variant > 5)
        throw ConfigError("prompt variant must be in [1, 5]");
    if (cfg.max_inflight < 1) throw ConfigError("max_inflight must be >= 1");
}

std::string to_string(Phase p) {
    switch (p) {
        case Phase::initiation: return "initiation";
        case Phase::discussion: return "discussion";
        case Phase::convergence: return "convergence";
    }
    throw ConfigError("unknown phase value");
}

Phase phase_from_string(const std::string& s) {
    if (s == "initiation") return Phase::initiation;
    if (s == "discussion") return Phase::discussion;
    if (s == "convergence") return Phase::convergence;
    throw ParseError("unknown phase: " + s);
}

void validate(const Transcript& t) {
    if (t.failure) return;
    if (t.rounds.empty()) throw ConfigError("transcript has no rounds");
    int n = static_cast<int>(t.rounds.size());
    for (int i = 0; i < n; ++i) {
        const RoundRecord& r = t.rounds[i];
        if (r.round != i + 1)
            throw ConfigError("non-contiguous rounds: expected round " +
                              std::to_string(i + 1) + ", found " +
                              std::to_string(r.round));
        if (static_cast<int>(r.entries.size()) != t.config.agents)
            throw ConfigError("round " + std::to_string(r.round) + " has " +
                              std::to_string(r.entries.size()) +
                              " entries, expected " +
                              std::to_string(t.config.agents));
        for (int a = 0; a < static_cast<int>(r.entries.size()); ++a)
            if (r.entries[a].agent_index != a)
                throw ConfigError("round " + std::to_string(r.round) +
                                  ": entries must be ordered by agent index");
        Phase expected = (i == 0) ? Phase::initiation
                         : (i == n - 1) ? Phase::convergence
                                        : Phase::discussion;
        if (r.phase != expected)
            throw ConfigError("round " + std::to_string(r.round) +
                              " has phase " + to_string(r.phase) +
                              ", expected " + to_string(expected));
    }
}

std::string to_string(ParseMode m) {
    switch (m) {
        case ParseMode::enumerated: return "enumerated";
        case ParseMode::fallback: return "fallback";
    }
    throw ConfigError("unknown parse mode");
}

ParseMode parse_mode_from_string(const std::string& s) {
    if (s == "enumerated") return ParseMode::enumerated;
    if (s == "fallback") return ParseMode::fallback;
    throw ParseError("unknown parse mode: " + s);
}

void validate(const AnswerList& answers) {
    if (answers.items.empty()) throw ConfigError("answer list has no items");
    for (const std::string& item : answers.items)
        if (item.empty() || whitespace_only(item))
            throw ConfigError("answer list contains a whitespace-only item");
}

std::string to_string(Metric m) {
    switch (m) {
        case Metric::originality: return "Originality";
        case Metric::elaboration: return "Elaboration";
        case Metric::fluency: return "Fluency";
        case Metric::flexibility: return "Flexibility";
    }
    throw ConfigError("unknown metric value");
}

Metric metric_from_string(const std::string& s) {
    std::string k = lower(s);
    if (k == "originality") return Metric::originality;
    if (k == "elaboration") return Metric::elaboration;
    if (k == "fluency") return Metric::fluency;
    if (k == "flexibility") return Metric::flexibility;
    throw ParseError("unknown metric: " + s);
}

bool is_itemwise(Metric m) {
    return m == Metric::originality || m == Metric::elaboration;
}

void validate(const ScoreRecord& record) {
    if (is_itemwise(record.metric)) {
        if (!record.item_scores || record.collective_samples)
            throw ConfigError(to_string(record.metric) +
                              " record must carry item scores only");
        double sum = 0.0;
        int n = 0, missing = 0;
        for (const auto& s : *record.item_scores) {
            if (s) { sum += *s; ++n; } else { ++missing; }
        }
        if (n == 0) throw ConfigError("itemwise record has no usable scores");
        if (missing != record.missing_items)
            throw ConfigError("missing_items does not match item_scores");
        if (std::abs(record.aggregate - sum / n) > 1e-9)
            throw ConfigError("aggregate is not the mean of present item scores");
    } else {
        if (!record.collective_samples || record.item_scores)
            throw ConfigError(to_string(record.metric) +
                              " record must carry collective samples only");
        const auto& v = *record.collective_samples;
        if (v.empty()) throw ConfigError("collective record has no samples");
        double sum = 0.0;
        for (double s : v) sum += s;
        if (std::abs(record.aggregate - sum / v.size()) > 1e-9)
            throw ConfigError("aggregate is not the mean of collective samples");
    }
}

void to_json(json& j, const BenchmarkTask& t) {
    j = json{{"benchmark", to_string(t.benchmark)},
             {"task_id", t.task_id},
             {"text", t.text}};
}

void from_json(const json& j, BenchmarkTask& t) {
    t.benchmark = benchmark_from_string(j.at("benchmark").get<std::string>());
    t.task_id = j.at("task_id").get<std::string>();
    t.text = j.at("text").get<std::string>();
}

void to_json(json& j, const ChatMessage& m) {
    j = json{{"role", to_string(m.speaker)}, {"content", m.content}};
}

void from_json(const json& j, ChatMessage& m) {
    m.speaker = speaker_from_string(j.at("role").get<std::string>());
    m.content = j.at("content").get<std::string>();
}

void to_json(json& j, const RoleCard& c) {
    j = json{{"type", "openai"},
             {"model_name", c.model_name},
             {"agent_name", c.agent_name},
             {"agent_role", c.agent_role},
             {"agent_speciality", c.agent_speciality},
             {"agent_role_prompt", c.agent_role_prompt}};
}

void from_json(const json& j, RoleCard& c) {
    c.agent_role = j.at("agent_role").get<std::string>();
    c.agent_speciality = j.at("agent_speciality").get<std::string>();
    c.agent_role_prompt = j.at("agent_role_prompt").get<std::string>();
    c.agent_name = j.value("agent_name", "");
    c.model_name = j.value("model_name", "");
}

void to_json(json& j, const RunConfig& c) {
    j = json{{"method", to_string(c.method)},
             {"rounds", c.rounds},
             {"agents", c.agents},
             {"model", c.model},
             {"temperature", c.temperature},
             {"top_p", c.top_p},
             {"seed", c.seed},
             {"amap", c.amap},
             {"backend", to_string(c.backend)},
             {"prompt_variant", c.prompt_variant},
             {"use_history", c.use_history},
             {"bts_candidates", c.bts_candidates},
             {"bts_k", c.bts_k},
             {"max_inflight", c.max_inflight}};
    if (c.single_strategy) j["single_strategy"] = to_string(*c.single_strategy);
    if (c.roles_file) j["roles_file"] = *c.roles_file;
}

void from_json(const json& j, RunConfig& c) {
    c = RunConfig{};
    c.method = method_from_string(j.at("method").get<std::string>());
    c.rounds = j.at("rounds").get<int>();
    c.agents = j.at("agents").get<int>();
    c.model = j.at("model").get<std::string>();
    c.temperature = j.at("temperature").get<double>();
    c.top_p = j.at("top_p").get<double>();
    c.seed = j.at("seed").get<long>();
    c.amap = j.at("amap").get<bool>();
    c.backend = backend_kind_from_string(j.at("backend").get<std::string>());
    c.prompt_variant = j.value("prompt_variant", 1);
    c.use_history = j.value("use_history", true);
    c.bts_candidates = j.value("bts_candidates", 10);
    c.bts_k = j.value("bts_k", 5);
    c.max_inflight = j.value("max_inflight", 4);
    if (j.contains("single_strategy"))
        c.single_strategy =
            single_strategy_from_string(j.at("single_strategy").get<std::string>());
    if (j.contains("roles_file"))
        c.roles_file = j.at("roles_file").get<std::string>();
}

void to_json(json& j, const AnswerList& a) {
    j = json{{"agent_index", a.agent_index},
             {"items", a.items},
             {"parse_mode", to_string(a.parse_mode)}};
}

void from_json(const json& j, AnswerList& a) {
    a.agent_index = j.at("agent_index").get<int>();
    a.items = j.at("items").get<std::vector<std::string>>();
    a.parse_mode = parse_mode_from_string(j.at("parse_mode").get<std::string>());
}

void to_json(json& j, const ScoreRecord& r) {
    j = json{{"run_id", r.run_id},
             {"task_id", r.task_id},
             {"agent_index", r.agent_index},
             {"metric", to_string(r.metric)},
             {"aggregate", r.aggregate},
             {"judge_raw", r.judge_raw},
             {"missing_items", r.missing_items}};
    if (r.item_scores) {
        json arr = json::array();
        for (const auto& s : *r.item_scores)
            arr.push_back(s ? json(*s) : json(nullptr));
        j["item_scores"] = std::move(arr);
    }
    if (r.collective_samples) j["collective_samples"] = *r.collective_samples;
}

void from_json(const json& j, ScoreRecord& r) {
    r = ScoreRecord{};
    r.run_id = j.at("run_id").get<std::string>();
    r.task_id = j.at("task_id").get<std::string>();
    r.agent_index = j.at("agent_index").get<int>();
    r.metric = metric_from_string(j.at("metric").get<std::string>());
    r.aggregate = j.at("aggregate").get<double>();
    r.judge_raw = j.at("judge_raw").get<std::vector<std::string>>();
    r.missing_items = j.at("missing_items").get<int>();
    if (j.contains("item_scores")) {
        std::vector<std::optional<double>> scores;
        for (const auto& s : j.at("item_scores"))
            scores.push_back(s.is_null() ? std::nullopt
                                         : std::optional<double>(s.get<double>()));
        r.item_scores = std::move(scores);
    }
    if (j.contains("collective_samples"))
        r.collective_samples = j.at("collective_samples").get<std::vector<double>>();
}

}  // namespace llmdisc
