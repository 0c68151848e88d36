#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "llmdisc/backend.hpp"
#include "llmdisc/prompts.hpp"
#include "llmdisc/templates.hpp"
#include "llmdisc/transcript.hpp"
#include "llmdisc/types.hpp"

namespace llmdisc {

struct MethodOutput {
    Transcript transcript;
    std::vector<AnswerList> final_answers;  // one per agent
};

// Streaming callbacks so callers can persist progress while a run is in
// flight. on_round fires after each round's barrier, in round order.
struct RunHooks {
    std::function<void(const RoundRecord&)> on_round;
};

struct RunOptions {
    std::string run_id;
    RetryPolicy retry;
    // Per-agent role cards; empty vector means no roles anywhere.
    std::vector<std::optional<RoleCard>> roles;
    const RunHooks* hooks = nullptr;
};

// Extracts answers from a model response. Primary path: enumerated markers
// ("1.", "2)", "3:") in ascending order; each item spans to the next marker.
// Line-anchored markers win over inline ones when they yield at least as
// many items, which keeps re-rendered numbered lists parsing to themselves.
// No markers: newline split, flagged ParseMode::fallback.
AnswerList parse_final_answers(const std::string& text, int agent_index = 0);

// Three-phase protocol: initiation round, discussion rounds with peer
// fan-out, one convergence round asking for the final numbered list.
MethodOutput run_discussion(const RunConfig& cfg, const BenchmarkTask& task,
                            ChatBackend& backend, const TemplateSet& tmpl,
                            const RunOptions& options = {});

// Same fan-out topology, verify-and-update prompts, no role preambles.
MethodOutput run_debate(const RunConfig& cfg, const BenchmarkTask& task,
                        ChatBackend& backend, const TemplateSet& tmpl,
                        const RunOptions& options = {});

MethodOutput run_single(const RunConfig& cfg, const BenchmarkTask& task,
                        ChatBackend& backend, const TemplateSet& tmpl,
                        const RunOptions& options = {});

// Brainstorm-then-select: one call producing candidates, one call choosing
// the k most original. AUT only.
MethodOutput run_bts(const RunConfig& cfg, const BenchmarkTask& task,
                     ChatBackend& backend, int k, const TemplateSet& tmpl,
                     const RunOptions& options = {});

// Dispatch on cfg.method (bts uses cfg.bts_k).
MethodOutput run_method(const RunConfig& cfg, const BenchmarkTask& task,
                        ChatBackend& backend, const TemplateSet& tmpl,
                        const RunOptions& options = {});

}  // namespace llmdisc
