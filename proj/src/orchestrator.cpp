#include "llmdisc/orchestrator.hpp"

#include <cctype>
#include <iostream>
#include <thread>

#include "llmdisc/errors.hpp"
#include "llmdisc/roles.hpp"

namespace llmdisc {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct Marker {
    size_t pos = 0;   // first digit
    size_t end = 0;   // past the separator
    long number = 0;
};

std::vector<Marker> scan_markers(const std::string& text, bool line_anchored) {
    std::vector<Marker> out;
    size_t i = 0;
    size_t n = text.size();
    while (i < n) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        bool anchored = (i == 0) ||
                        (line_anchored
                             ? text[i - 1] == '\n'
                             : std::isspace(static_cast<unsigned char>(text[i - 1])));
        size_t j = i;
        while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        bool has_sep = j < n && (text[j] == '.' || text[j] == ')' || text[j] == ':');
        bool sep_terminated =
            has_sep && (j + 1 == n ||
                        std::isspace(static_cast<unsigned char>(text[j + 1])));
        if (anchored && sep_terminated && j - i <= 4)
            out.push_back({i, j + 1, std::stol(text.substr(i, j - i))});
        i = j + 1;
    }
    return out;
}

std::vector<std::string> chain_items(const std::string& text,
                                     const std::vector<Marker>& markers) {
    if (markers.empty()) return {};
    size_t start = 0;
    while (start < markers.size() && markers[start].number != 1) ++start;
    if (start == markers.size()) start = 0;
    std::vector<Marker> chain{markers[start]};
    for (size_t i = start + 1; i < markers.size(); ++i)
        if (markers[i].number == chain.back().number + 1 &&
            markers[i].pos >= chain.back().end)
            chain.push_back(markers[i]);
    std::vector<std::string> items;
    for (size_t i = 0; i < chain.size(); ++i) {
        size_t from = chain[i].end;
        size_t to = (i + 1 < chain.size()) ? chain[i + 1].pos : text.size();
        std::string item = trim(text.substr(from, to - from));
        if (!item.empty()) items.push_back(std::move(item));
    }
    return items;
}

// One slot per agent; all calls in a round join before assembly so the
// result depends only on inputs, never on completion order.
void parallel_for_agents(int agents, const std::function<void(int)>& fn) {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(agents);
    workers.reserve(agents);
    for (int i = 0; i < agents; ++i)
        workers.emplace_back([&, i] {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        });
    for (std::thread& w : workers) w.join();
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

std::vector<std::optional<std::string>> role_preambles(const RunOptions& options,
                                                       int agents) {
    std::vector<std::optional<std::string>> preambles(agents);
    if (options.roles.empty()) return preambles;
    if (static_cast<int>(options.roles.size()) != agents)
        throw ConfigError("role assignment size (" +
                          std::to_string(options.roles.size()) +
                          ") does not match agent count (" +
                          std::to_string(agents) + ")");
    for (int i = 0; i < agents; ++i)
        if (options.roles[i])
            preambles[i] = compose_role_preamble(*options.roles[i]);
    return preambles;
}

Phase phase_for_round(int round, int total_rounds) {
    if (round == 1) return Phase::initiation;
    if (round == total_rounds) return Phase::convergence;
    return Phase::discussion;
}

std::vector<std::string> peers_of(const std::vector<std::string>& responses,
                                  int self) {
    std::vector<std::string> others;
    others.reserve(responses.size() - 1);
    for (size_t j = 0; j < responses.size(); ++j)
        if (static_cast<int>(j) != self) others.push_back(responses[j]);
    return others;
}

// Shared engine for discussion and debate: identical fan-out topology and
// history handling, differing only in how each round's prompt is built.
MethodOutput run_fanout(
    const RunConfig& cfg, const BenchmarkTask& task, ChatBackend& backend,
    const RunOptions& options,
    const std::function<std::string(int agent, int round, Phase phase,
                                    const std::vector<std::string>& others)>&
        prompt_for) {
    validate(task);
    MethodOutput out;
    out.transcript.run_id = options.run_id;
    out.transcript.task_id = task.task_id;
    out.transcript.config = cfg;

    std::vector<AgentState> agents(cfg.agents);
    for (int i = 0; i < cfg.agents; ++i) agents[i].agent_index = i;
    std::vector<std::string> previous;

    for (int round = 1; round <= cfg.rounds; ++round) {
        Phase phase = phase_for_round(round, cfg.rounds);
        std::vector<std::string> prompts(cfg.agents);
        std::vector<std::string> responses(cfg.agents);
        for (int i = 0; i < cfg.agents; ++i)
            prompts[i] = prompt_for(i, round, phase,
                                    round == 1 ? std::vector<std::string>{}
                                               : peers_of(previous, i));
        parallel_for_agents(cfg.agents, [&](int i) {
            ChatRequest req;
            req.model = cfg.model;
            if (cfg.use_history) req.messages = agents[i].history;
            req.messages.push_back({Speaker::user, prompts[i]});
            req.temperature = cfg.temperature;
            req.top_p = cfg.top_p;
            req.tag = RouteTag{i, round, ""};
            responses[i] = complete_with_retry(backend, req, options.retry).content;
        });
        RoundRecord record;
        record.round = round;
        record.phase = phase;
        for (int i = 0; i < cfg.agents; ++i) {
            record.entries.push_back({i, prompts[i], responses[i]});
            agents[i].history.push_back({Speaker::user, prompts[i]});
            agents[i].history.push_back({Speaker::assistant, responses[i]});
        }
        out.transcript.rounds.push_back(record);
        if (options.hooks && options.hooks->on_round)
            options.hooks->on_round(record);
        previous = std::move(responses);
    }
    for (int i = 0; i < cfg.agents; ++i)
        out.final_answers.push_back(parse_final_answers(previous[i], i));
    validate(out.transcript);
    return out;
}

}  // namespace

AnswerList parse_final_answers(const std::string& text, int agent_index) {
    if (text.empty()) throw ParseError("cannot parse answers from empty text");
    AnswerList out;
    out.agent_index = agent_index;
    std::vector<std::string> line_items =
        chain_items(text, scan_markers(text, true));
    std::vector<std::string> inline_items =
        chain_items(text, scan_markers(text, false));
    if (!line_items.empty() || !inline_items.empty()) {
        out.items = line_items.size() >= inline_items.size()
                        ? std::move(line_items)
                        : std::move(inline_items);
        out.parse_mode = ParseMode::enumerated;
        return out;
    }
    std::string line;
    for (size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            std::string item = trim(line);
            if (!item.empty()) out.items.push_back(std::move(item));
            line.clear();
        } else {
            line += text[i];
        }
    }
    out.parse_mode = ParseMode::fallback;
    if (out.items.empty())
        throw ParseError("no parsable answers in response text");
    return out;
}

MethodOutput run_discussion(const RunConfig& cfg, const BenchmarkTask& task,
                            ChatBackend& backend, const TemplateSet& tmpl,
                            const RunOptions& options) {
    if (cfg.method != Method::discussion)
        throw ConfigError("run_discussion requires method=discussion");
    validate(cfg);
    PromptVariant variant = tmpl.variant(cfg.prompt_variant);
    std::vector<std::optional<std::string>> preambles =
        role_preambles(options, cfg.agents);
    return run_fanout(
        cfg, task, backend, options,
        [&](int agent, int, Phase phase, const std::vector<std::string>& others) {
            switch (phase) {
                case Phase::initiation:
                    return build_initiation_prompt(task, preambles[agent], variant,
                                                   tmpl);
                case Phase::discussion:
                    return build_discussion_prompt(task, preambles[agent], others,
                                                   variant, tmpl);
                case Phase::convergence:
                    return build_convergence_prompt(task, preambles[agent], others,
                                                    cfg.amap, variant, tmpl);
            }
            throw ConfigError("unknown phase");
        });
}

MethodOutput run_debate(const RunConfig& cfg, const BenchmarkTask& task,
                        ChatBackend& backend, const TemplateSet& tmpl,
                        const RunOptions& options) {
    if (cfg.method != Method::debate)
        throw ConfigError("run_debate requires method=debate");
    validate(cfg);
    return run_fanout(
        cfg, task, backend, options,
        [&](int, int, Phase phase, const std::vector<std::string>& others) {
            if (phase == Phase::initiation)
                return build_debate_initial_prompt(task, tmpl);
            return build_debate_update_prompt(task, others,
                                              phase == Phase::convergence, tmpl);
        });
}

MethodOutput run_single(const RunConfig& cfg, const BenchmarkTask& task,
                        ChatBackend& backend, const TemplateSet& tmpl,
                        const RunOptions& options) {
    if (cfg.method != Method::single)
        throw ConfigError("run_single requires method=single");
    validate(cfg);
    validate(task);
    std::vector<std::optional<std::string>> preambles = role_preambles(options, 1);
    MethodOutput out;
    out.transcript.run_id = options.run_id;
    out.transcript.task_id = task.task_id;
    out.transcript.config = cfg;

    std::string prompt =
        build_single_prompt(task, *cfg.single_strategy, preambles[0], tmpl);
    ChatRequest req;
    req.model = cfg.model;
    req.messages = {{Speaker::user, prompt}};
    req.temperature = cfg.temperature;
    req.top_p = cfg.top_p;
    req.tag = RouteTag{0, 1, ""};
    std::string response = complete_with_retry(backend, req, options.retry).content;

    RoundRecord record{1, Phase::initiation, {{0, prompt, response}}};
    out.transcript.rounds.push_back(record);
    if (options.hooks && options.hooks->on_round) options.hooks->on_round(record);
    out.final_answers.push_back(parse_final_answers(response, 0));
    validate(out.transcript);
    return out;
}

MethodOutput run_bts(const RunConfig& cfg, const BenchmarkTask& task,
                     ChatBackend& backend, int k, const TemplateSet& tmpl,
                     const RunOptions& options) {
    if (cfg.method != Method::bts)
        throw ConfigError("run_bts requires method=bts");
    validate(cfg);
    validate(task);
    if (task.benchmark != Benchmark::aut)
        throw ConfigError("bts is defined for the AUT benchmark only");
    if (k < 1) throw ConfigError("bts selection size must be >= 1");

    MethodOutput out;
    out.transcript.run_id = options.run_id;
    out.transcript.task_id = task.task_id;
    out.transcript.config = cfg;

    auto call = [&](const std::string& prompt, int round) {
        ChatRequest req;
        req.model = cfg.model;
        req.messages = {{Speaker::user, prompt}};
        req.temperature = cfg.temperature;
        req.top_p = cfg.top_p;
        req.tag = RouteTag{0, round, ""};
        return complete_with_retry(backend, req, options.retry).content;
    };

    std::string brainstorm_prompt =
        build_bts_brainstorm_prompt(task, cfg.bts_candidates, tmpl);
    std::string brainstorm_response = call(brainstorm_prompt, 1);
    RoundRecord first{1, Phase::initiation,
                      {{0, brainstorm_prompt, brainstorm_response}}};
    out.transcript.rounds.push_back(first);
    if (options.hooks && options.hooks->on_round) options.hooks->on_round(first);
    AnswerList candidates = parse_final_answers(brainstorm_response, 0);

    std::string select_prompt = build_bts_select_prompt(task, candidates.items, k, tmpl);
    std::string select_response = call(select_prompt, 2);
    RoundRecord second{2, Phase::convergence,
                       {{0, select_prompt, select_response}}};
    out.transcript.rounds.push_back(second);
    if (options.hooks && options.hooks->on_round) options.hooks->on_round(second);

    AnswerList selected = parse_final_answers(select_response, 0);
    if (static_cast<int>(selected.items.size()) > k) {
        std::cerr << "warning: selection returned " << selected.items.size()
                  << " items, truncating to " << k << "\n";
        selected.items.resize(k);
    }
    out.final_answers.push_back(std::move(selected));
    validate(out.transcript);
    return out;
}

MethodOutput run_method(const RunConfig& cfg, const BenchmarkTask& task,
                        ChatBackend& backend, const TemplateSet& tmpl,
                        const RunOptions& options) {
    switch (cfg.method) {
        case Method::discussion:
            return run_discussion(cfg, task, backend, tmpl, options);
        case Method::debate: return run_debate(cfg, task, backend, tmpl, options);
        case Method::single: return run_single(cfg, task, backend, tmpl, options);
        case Method::bts:
            return run_bts(cfg, task, backend, cfg.bts_k, tmpl, options);
    }
    throw ConfigError("unknown method");
}

}  // namespace llmdisc
