#pragma once

#include <string>
#include <vector>

#include "llmdisc/backend.hpp"
#include "llmdisc/orchestrator.hpp"
#include "llmdisc/templates.hpp"
#include "llmdisc/types.hpp"

namespace llmdisc {

struct JudgeConfig {
    std::string model = "gpt-3.5-turbo-0125";
    double temperature = 1.0;
    double top_p = 1.0;
    int repeats_collective = 3;
    int repeats_itemwise = 1;
    // Total attempts per sample before it is recorded as missing.
    int max_parse_retries = 3;
};

void validate(const JudgeConfig& cfg);

// Rubric plus rendered payload. Originality/Elaboration take exactly one
// item ("Response: ..."); Fluency/Flexibility take the whole list
// ("Responses:" + numbered lines).
std::string build_judge_prompt(Metric metric, Benchmark benchmark,
                               const std::vector<std::string>& payload,
                               const TemplateSet& tmpl);

// The number inside the last parseable [[...]] token. Unparseable tokens
// (like an echoed "[[X]]") are skipped.
double extract_score(const std::string& judge_text);

// One judge call per item (times repeats_itemwise). Scores must be
// integers in 1..5; anything else is retried, never clamped. Items with no
// accepted score after retries are recorded missing and excluded from the
// aggregate.
ScoreRecord score_itemwise(Metric metric, const AnswerList& answers,
                           Benchmark benchmark, ChatBackend& backend,
                           const JudgeConfig& cfg, const TemplateSet& tmpl,
                           const std::string& run_id = "",
                           const std::string& task_id = "");

// repeats_collective calls over the whole list; accepts any non-negative
// count (counts are unbounded, decimals allowed).
ScoreRecord score_collective(Metric metric, const AnswerList& answers,
                             Benchmark benchmark, ChatBackend& backend,
                             const JudgeConfig& cfg, const TemplateSet& tmpl,
                             const std::string& run_id = "",
                             const std::string& task_id = "");

// All agents' lists concatenated (exact duplicate items dropped), labeled
// agent_index -1.
AnswerList merge_answer_lists(const std::vector<AnswerList>& lists);

struct EvaluationFailure {
    int agent_index = 0;
    Metric metric = Metric::originality;
    std::string error;
};

// Four metrics per answer list. A failing record never aborts its
// siblings: failures are collected into *failures when provided, otherwise
// the first one is rethrown after all records have been attempted.
std::vector<ScoreRecord> evaluate_method_output(
    const MethodOutput& out, Benchmark benchmark, ChatBackend& backend,
    const JudgeConfig& cfg, const TemplateSet& tmpl, bool merged = false,
    std::vector<EvaluationFailure>* failures = nullptr);

}  // namespace llmdisc
