#include "llmdisc/prompts.hpp"

#include <regex>
#include <sstream>

#include "llmdisc/errors.hpp"

namespace llmdisc {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

size_t longest_backtick_run(const std::string& s) {
    size_t best = 0, run = 0;
    for (char c : s) {
        run = (c == '`') ? run + 1 : 0;
        best = std::max(best, run);
    }
    return best;
}

std::string discussion_body(const BenchmarkTask& task,
                            const std::optional<std::string>& role_preamble,
                            const std::vector<std::string>& others,
                            const PromptVariant& variant,
                            const TemplateSet& tmpl) {
    if (others.empty())
        throw ConfigError("discussion prompt needs at least one peer response");
    std::string out = role_preamble.value_or("");
    out += tmpl.discussion_lead;
    for (const std::string& response : others) out += peer_block(response, tmpl);
    out += restated_task(task.text);
    out += ' ';
    out += goal_sentence(task, tmpl);
    out += ' ';
    out += variant.rendered_text;
    return out;
}

}  // namespace

std::string extract_aut_subject(const std::string& task_text,
                                const TemplateSet& tmpl) {
    static const std::regex pattern(
        R"(creative use(?:s)?\s+(?:for|of)\s+(.+?)\s*(?=[?.!]|$))",
        std::regex_constants::icase);
    std::smatch m;
    if (std::regex_search(task_text, m, pattern)) return m[1].str();
    return tmpl.fallback_subject;
}

std::string goal_sentence(const BenchmarkTask& task, const TemplateSet& tmpl) {
    const std::string& goal = tmpl.goal_template(task.benchmark);
    if (task.benchmark == Benchmark::aut)
        return render_template(goal,
                               {{"subject", extract_aut_subject(task.text, tmpl)}});
    return goal;
}

std::string restated_task(const std::string& task_text) {
    std::string t = trim(task_text);
    if (t.empty()) throw ConfigError("task text must be non-empty");
    char last = t.back();
    if (last != '.' && last != '?' && last != '!') t += '.';
    return t;
}

std::string peer_block(const std::string& response, const TemplateSet& tmpl) {
    std::string fence(std::max<size_t>(3, longest_backtick_run(response) + 1), '`');
    return tmpl.peer_block_label + fence + response + fence + " ";
}

std::string build_initiation_prompt(const BenchmarkTask& task,
                                    const std::optional<std::string>& role_preamble,
                                    const PromptVariant& variant,
                                    const TemplateSet& tmpl) {
    validate(task);
    std::string out = role_preamble.value_or("");
    out += tmpl.initiation_lead;
    out += restated_task(task.text);
    out += ' ';
    out += goal_sentence(task, tmpl);
    out += ' ';
    out += variant.rendered_text;
    return out;
}

std::string build_discussion_prompt(const BenchmarkTask& task,
                                    const std::optional<std::string>& role_preamble,
                                    const std::vector<std::string>& others,
                                    const PromptVariant& variant,
                                    const TemplateSet& tmpl) {
    validate(task);
    return discussion_body(task, role_preamble, others, variant, tmpl);
}

std::string build_convergence_prompt(const BenchmarkTask& task,
                                     const std::optional<std::string>& role_preamble,
                                     const std::vector<std::string>& others,
                                     bool amap, const PromptVariant& variant,
                                     const TemplateSet& tmpl) {
    validate(task);
    std::string out = discussion_body(task, role_preamble, others, variant, tmpl);
    out += ' ';
    out += tmpl.convergence_suffix;
    if (amap) {
        out += ' ';
        out += tmpl.amap_suffix;
    }
    return out;
}

std::string build_single_prompt(const BenchmarkTask& task, SingleStrategy strategy,
                                const std::optional<std::string>& role_preamble,
                                const TemplateSet& tmpl) {
    validate(task);
    std::string base = restated_task(task.text) + ' ' + goal_sentence(task, tmpl) +
                       ' ' + tmpl.listing_instruction;
    std::string out = role_preamble.value_or("");
    switch (strategy) {
        case SingleStrategy::zero_shot: return out + base;
        case SingleStrategy::few_shot: return out + tmpl.few_shot_prefix + base;
        case SingleStrategy::cot: return out + base + ' ' + tmpl.cot_suffix;
        case SingleStrategy::stimuli:
            return out + base + ' ' + tmpl.stimuli_suffix;
        case SingleStrategy::deep_breath:
            return out + base + ' ' + tmpl.deep_breath_suffix;
    }
    throw ConfigError("unknown single-agent strategy");
}

std::string build_debate_initial_prompt(const BenchmarkTask& task,
                                        const TemplateSet& tmpl) {
    validate(task);
    return restated_task(task.text) + ' ' + goal_sentence(task, tmpl) + ' ' +
           tmpl.listing_instruction;
}

std::string build_debate_update_prompt(const BenchmarkTask& task,
                                       const std::vector<std::string>& others,
                                       bool final_round, const TemplateSet& tmpl) {
    validate(task);
    if (others.empty())
        throw ConfigError("debate update prompt needs at least one peer response");
    std::string out = tmpl.discussion_lead;
    for (const std::string& response : others) out += peer_block(response, tmpl);
    out += render_template(tmpl.debate_update,
                           {{"task", restated_task(task.text)},
                            {"goal", goal_sentence(task, tmpl)}});
    if (final_round) {
        out += ' ';
        out += tmpl.debate_final_suffix;
    }
    return out;
}

std::string build_bts_brainstorm_prompt(const BenchmarkTask& task, int candidates,
                                        const TemplateSet& tmpl) {
    validate(task);
    return render_template(tmpl.bts_brainstorm,
                           {{"task", restated_task(task.text)},
                            {"goal", goal_sentence(task, tmpl)},
                            {"n", std::to_string(candidates)}});
}

std::string build_bts_select_prompt(const BenchmarkTask& task,
                                    const std::vector<std::string>& candidates,
                                    int k, const TemplateSet& tmpl) {
    validate(task);
    if (candidates.empty())
        throw ConfigError("selection prompt needs at least one candidate");
    return render_template(tmpl.bts_select,
                           {{"task", restated_task(task.text)},
                            {"candidates", render_numbered(candidates)},
                            {"k", std::to_string(k)}});
}

std::string render_numbered(const std::vector<std::string>& items) {
    std::ostringstream out;
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) out << '\n';
        out << (i + 1) << ". " << items[i];
    }
    return out.str();
}

}  // namespace llmdisc
