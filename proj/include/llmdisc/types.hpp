#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace llmdisc {

using json = nlohmann::json;

enum class Benchmark { aut, instances, similarities, scientific };

std::string to_string(Benchmark b);
Benchmark benchmark_from_string(const std::string& s);

struct BenchmarkTask {
    Benchmark benchmark = Benchmark::aut;
    std::string task_id;
    std::string text;

    bool operator==(const BenchmarkTask&) const = default;
};

void validate(const BenchmarkTask& task);

enum class Speaker { system, user, assistant };

std::string to_string(Speaker s);
Speaker speaker_from_string(const std::string& s);

struct ChatMessage {
    Speaker speaker = Speaker::user;
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

struct RoleCard {
    std::string agent_role;
    std::string agent_speciality;
    std::string agent_role_prompt;
    std::string agent_name;
    std::string model_name;

    bool operator==(const RoleCard&) const = default;
};

void validate(const RoleCard& card);

// Per-agent conversation state across rounds. History alternates
// user/assistant starting with user.
struct AgentState {
    int agent_index = 0;
    std::optional<RoleCard> role;
    std::vector<ChatMessage> history;

    bool operator==(const AgentState&) const = default;
};

void validate(const AgentState& state);

enum class Method { discussion, debate, single, bts };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

enum class SingleStrategy { zero_shot, few_shot, cot, stimuli, deep_breath };

std::string to_string(SingleStrategy s);
SingleStrategy single_strategy_from_string(const std::string& s);

enum class BackendKind { openai_compatible, mock };

std::string to_string(BackendKind k);
BackendKind backend_kind_from_string(const std::string& s);

struct RunConfig {
    Method method = Method::discussion;
    std::optional<SingleStrategy> single_strategy;
    int rounds = 5;
    int agents = 4;
    std::string model = "gpt-3.5-turbo-0125";
    double temperature = 1.0;
    double top_p = 1.0;
    long seed = 0;
    std::optional<std::string> roles_file;
    bool amap = false;
    BackendKind backend = BackendKind::mock;
    int prompt_variant = 1;
    bool use_history = true;
    int bts_candidates = 10;
    int bts_k = 5;
    int max_inflight = 4;

    bool operator==(const RunConfig&) const = default;
};

// Applies structural consequences of the method choice: single and bts
// force one agent; single is one round and bts exactly two.
RunConfig normalized(RunConfig cfg);
void validate(const RunConfig& cfg);

enum class Phase { initiation, discussion, convergence };

std::string to_string(Phase p);
Phase phase_from_string(const std::string& s);

struct TranscriptEntry {
    int agent_index = 0;
    std::string prompt;
    std::string response;

    bool operator==(const TranscriptEntry&) const = default;
};

struct RoundRecord {
    int round = 0;
    Phase phase = Phase::initiation;
    std::vector<TranscriptEntry> entries;

    bool operator==(const RoundRecord&) const = default;
};

struct Transcript {
    std::string run_id;
    std::string task_id;
    RunConfig config;
    std::vector<RoundRecord> rounds;
    std::optional<std::string> failure;

    bool operator==(const Transcript&) const = default;
};

// Structural invariants: contiguous rounds from 1, uniform entry count
// equal to config.agents, initiation first, convergence last when the
// schedule has two or more rounds. Skipped for failed partial records.
void validate(const Transcript& t);

enum class ParseMode { enumerated, fallback };

std::string to_string(ParseMode m);
ParseMode parse_mode_from_string(const std::string& s);

struct AnswerList {
    int agent_index = 0;
    std::vector<std::string> items;
    ParseMode parse_mode = ParseMode::enumerated;

    bool operator==(const AnswerList&) const = default;
};

void validate(const AnswerList& answers);

enum class Metric { originality, elaboration, fluency, flexibility };

std::string to_string(Metric m);
Metric metric_from_string(const std::string& s);
bool is_itemwise(Metric m);

struct ScoreRecord {
    std::string run_id;
    std::string task_id;
    int agent_index = 0;  // -1 marks a merged team answer list
    Metric metric = Metric::originality;
    // Itemwise metrics: one slot per answer item, nullopt where the judge
    // never produced a usable score.
    std::optional<std::vector<std::optional<double>>> item_scores;
    // Collective metrics: one accepted sample per successful repeat.
    std::optional<std::vector<double>> collective_samples;
    double aggregate = 0.0;
    std::vector<std::string> judge_raw;
    int missing_items = 0;

    bool operator==(const ScoreRecord&) const = default;
};

void validate(const ScoreRecord& record);

void to_json(json& j, const BenchmarkTask& t);
void from_json(const json& j, BenchmarkTask& t);
void to_json(json& j, const ChatMessage& m);
void from_json(const json& j, ChatMessage& m);
void to_json(json& j, const RoleCard& c);
void from_json(const json& j, RoleCard& c);
void to_json(json& j, const RunConfig& c);
void from_json(const json& j, RunConfig& c);
void to_json(json& j, const AnswerList& a);
void from_json(const json& j, AnswerList& a);
void to_json(json& j, const ScoreRecord& r);
void from_json(const json& j, ScoreRecord& r);

}  // namespace llmdisc
