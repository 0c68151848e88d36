#pragma once

#include <optional>
#include <string>
#include <vector>

#include "llmdisc/templates.hpp"
#include "llmdisc/types.hpp"

namespace llmdisc {

// "a fork" from "What are some creative uses for a fork?"; falls back to
// the template's generic subject when the task matches no known shape.
std::string extract_aut_subject(const std::string& task_text,
                                const TemplateSet& tmpl);

// The benchmark-specific goal sentence; for AUT the extracted subject is
// substituted into the template.
std::string goal_sentence(const BenchmarkTask& task, const TemplateSet& tmpl);

// Task text trimmed, with "." appended only when it lacks terminal
// punctuation (tasks carry their own "?" or ".").
std::string restated_task(const std::string& task_text);

// "One agent solution: ```{response}``` " with a fence one backtick longer
// than the longest run inside the response, so contents stay verbatim.
std::string peer_block(const std::string& response, const TemplateSet& tmpl);

std::string build_initiation_prompt(const BenchmarkTask& task,
                                    const std::optional<std::string>& role_preamble,
                                    const PromptVariant& variant,
                                    const TemplateSet& tmpl);

std::string build_discussion_prompt(const BenchmarkTask& task,
                                    const std::optional<std::string>& role_preamble,
                                    const std::vector<std::string>& others,
                                    const PromptVariant& variant,
                                    const TemplateSet& tmpl);

std::string build_convergence_prompt(const BenchmarkTask& task,
                                     const std::optional<std::string>& role_preamble,
                                     const std::vector<std::string>& others,
                                     bool amap, const PromptVariant& variant,
                                     const TemplateSet& tmpl);

std::string build_single_prompt(const BenchmarkTask& task, SingleStrategy strategy,
                                const std::optional<std::string>& role_preamble,
                                const TemplateSet& tmpl);

std::string build_debate_initial_prompt(const BenchmarkTask& task,
                                        const TemplateSet& tmpl);

std::string build_debate_update_prompt(const BenchmarkTask& task,
                                       const std::vector<std::string>& others,
                                       bool final_round, const TemplateSet& tmpl);

std::string build_bts_brainstorm_prompt(const BenchmarkTask& task, int candidates,
                                        const TemplateSet& tmpl);

std::string build_bts_select_prompt(const BenchmarkTask& task,
                                    const std::vector<std::string>& candidates,
                                    int k, const TemplateSet& tmpl);

// Items rendered as "1. first\n2. second\n..." (the canonical list form).
std::string render_numbered(const std::vector<std::string>& items);

}  // namespace llmdisc
