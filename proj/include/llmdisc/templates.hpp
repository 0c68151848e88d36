#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "llmdisc/types.hpp"

namespace llmdisc {

struct PromptVariant {
    int variant_id = 1;
    // The sentence as published in the variant table.
    std::string initiation_text;
    // The sentence as actually embedded in composed prompts. Differs from
    // initiation_text only for variant 1, whose published form was rephrased
    // in the recorded discussions.
    std::string rendered_text;

    bool operator==(const PromptVariant&) const = default;
};

// Every prompt fragment the toolkit composes. Built-in defaults are
// compiled in; a directory of UTF-8 text files (one per field, named
// "<field>.txt", one trailing newline stripped) can override any of them.
struct TemplateSet {
    std::string initiation_lead;
    std::string discussion_lead;
    std::string peer_block_label;
    std::string convergence_suffix;
    std::string amap_suffix;
    std::string listing_instruction;

    std::string goal_aut;  // carries {subject}
    std::string goal_instances;
    std::string goal_similarities;
    std::string goal_scientific;
    std::string fallback_subject;

    std::string variant_1;
    std::string variant_1_rendered;
    std::string variant_2;
    std::string variant_3;
    std::string variant_4;
    std::string variant_5;

    std::string cot_suffix;
    std::string stimuli_suffix;
    std::string deep_breath_suffix;
    std::string few_shot_prefix;

    std::string debate_update;        // carries {task} and {goal}
    std::string debate_final_suffix;

    std::string bts_brainstorm;  // carries {task}, {goal}, {n}
    std::string bts_select;      // carries {task}, {candidates}, {k}

    std::string augment_instruction;  // carries {benchmark}, {samples}, {n}
    std::string roles_brainstorm;     // carries {n}
    std::string roles_format;

    std::string rubric_originality;  // carries {task_phrase}
    std::string rubric_elaboration;  // carries {task_phrase}
    std::string rubric_fluency;      // carries {answer_phrase}
    std::string rubric_flexibility;  // carries {answer_phrase}

    std::string task_phrase_aut;
    std::string task_phrase_instances;
    std::string task_phrase_similarities;
    std::string task_phrase_scientific;
    std::string answer_phrase_aut;
    std::string answer_phrase_instances;
    std::string answer_phrase_similarities;
    std::string answer_phrase_scientific;

    static TemplateSet builtin();
    // Built-ins overlaid with any "<field>.txt" files found in dir.
    static TemplateSet load(const std::string& dir);

    PromptVariant variant(int variant_id) const;
    const std::string& goal_template(Benchmark b) const;
    const std::string& task_phrase(Benchmark b) const;
    const std::string& answer_phrase(Benchmark b) const;

    // Field registry (name -> member) driving file overrides and the
    // template export used to keep the data directory in sync.
    static const std::map<std::string, std::string TemplateSet::*>& fields();
};

// Replaces each "{key}" with its value; unknown placeholders are left as-is.
std::string render_template(
    std::string_view tmpl,
    const std::vector<std::pair<std::string_view, std::string_view>>& values);

}  // namespace llmdisc
