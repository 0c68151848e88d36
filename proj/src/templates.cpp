#include "llmdisc/templates.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "llmdisc/errors.hpp"

namespace llmdisc {

TemplateSet TemplateSet::builtin() {
    TemplateSet t;

    t.initiation_lead =
        "Initiate a discussion with others to collectively complete the "
        "following task: ";
    t.discussion_lead =
        "These are the solutions to the problem from other agents: ";
    t.peer_block_label = "One agent solution: ";
    t.convergence_suffix =
        "This is the last round of the discussion, please finalize and "
        "present a list of creative answers. Please list the final response "
        "in 1. ... 2. ... 3. ... and so on.";
    t.amap_suffix = "Please present as many answers as possible.";
    t.listing_instruction =
        "Please list the final response in 1. ... 2. ... 3. ... and so on.";

    const std::string goal_head =
        "The goal is to come up with creative ideas, which are ideas that "
        "strike people as clever, unusual, interesting, uncommon, humorous, "
        "innovative, or different. ";
    t.goal_aut = goal_head +
                 "Present a list of as many creative and diverse uses for "
                 "{subject} as possible.";
    t.goal_instances =
        goal_head + "Present a list of as many creative and diverse answers "
                    "as possible.";
    t.goal_similarities =
        goal_head + "Present a list of as many creative and diverse "
                    "similarities as possible.";
    t.goal_scientific =
        goal_head + "Present a list of as many creative and diverse ideas "
                    "as possible.";
    t.fallback_subject = "the item";

    t.variant_1 =
        "You would be in a group discussion with other teammates, as a "
        "result, you should answer as diverge and creative as you can.";
    t.variant_1_rendered =
        "You are in a group discussion with other teammates; as a result, "
        "answer as diversely and creatively as you can.";
    t.variant_2 =
        "You're in a brainstorming session where each idea leads to the "
        "next. Embrace the flow of creativity without limits, encouraging "
        "one another to build on each suggestion for unexpected connections.";
    t.variant_3 =
        "Pretend your team is at a think tank where unconventional ideas "
        "are the norm. Challenge each other to think from different "
        "perspectives, considering the most unusual or innovative ideas.";
    t.variant_4 =
        "Engage in a collaborative discussion where each of you contributes "
        "a unique insight or query, aiming to delve into uncharted "
        "territories of thought. Throughout the discussion, focus on "
        "expanding the scope and depth of each contribution through "
        "constructive feedback, counterpoints, and further questioning. The "
        "objective is to achieve a broad spectrum of ideas and solutions, "
        "promoting a culture of continuous learning and innovation.";
    t.variant_5 =
        "Envision your group as a crew on a mission to solve a mystery "
        "using only your creativity and wit. How would you piece together "
        "clues from each member's ideas to find the solution? And this "
        "would be crucial to your member's life";

    t.cot_suffix = "Let's think step by step.";
    t.stimuli_suffix = "This is really important for my career.";
    t.deep_breath_suffix =
        "Take a deep breath and work on this problem step-by-step.";
    t.few_shot_prefix =
        "Here are a few examples of creative responses to a similar task.\n"
        "Task: What are some creative uses for a paperclip?\n"
        "Creative answers: 1. A tiny rake for a desktop zen garden. 2. A "
        "lock pick for a diary you forgot the key to. 3. A sculpture wire "
        "for one-inch figurines. 4. A zipper pull replacement that doubles "
        "as jewelry.\n\nNow complete the following task in the same spirit. ";

    t.debate_update =
        "Please examine the responses from other agents and verify the "
        "correctness and reasonableness of their answers. Use their "
        "responses as additional advice and update your own answer to the "
        "following task: {task} {goal}";
    t.debate_final_suffix =
        "This is the last round of the debate, please present your final "
        "list of answers. Please list the final response in 1. ... 2. ... "
        "3. ... and so on.";

    t.bts_brainstorm =
        "{task} {goal} Brainstorm a list of {n} candidate ideas. Please "
        "list the final response in 1. ... 2. ... 3. ... and so on.";
    t.bts_select =
        "You are a critical judge of creativity. These are candidate ideas "
        "for the following task: {task}\n\nCandidates:\n{candidates}\n\n"
        "Judge the candidates on originality, meaning uniqueness and "
        "novelty: ideas that are not the usual thoughts and are seldom "
        "mentioned in typical contexts. Select the {k} most original "
        "candidates and present only them, keeping their wording. Please "
        "list the final response in 1. ... 2. ... 3. ... and so on.";

    t.augment_instruction =
        "Here are sample tasks from the {benchmark} benchmark, a divergent "
        "thinking benchmark:\n{samples}\nGenerate {n} additional tasks in "
        "the same style. Each task must be a single self-contained "
        "instruction phrased like the samples, and no two tasks may repeat "
        "a subject. Please list the final response in 1. ... 2. ... 3. ... "
        "and so on.";
    t.roles_brainstorm =
        "What are some roles that are typically used in boosting creative "
        "thinking, like different personas to diversitize the ideation "
        "stage. Please propose {n} distinct personas, each with a short "
        "description of the perspective it contributes.";
    t.roles_format =
        "Great, now follow this format and generate a .json file for these "
        "roles: Remain \"type\": \"openai\", \"model_name\": "
        "\"gpt-3.5-turbo\", the same. and the agent_name = \"GPT Agent 1 - "
        "{agent_role}\"\n[\n  {\n    \"type\": \"openai\",\n    "
        "\"model_name\": \"gpt-3.5-turbo\",\n    \"agent_name\": \"GPT "
        "Agent 1 - White Hat\",\n    \"agent_role\": \"White Hat\",\n    "
        "\"agent_speciality\": \"Information Analysis and Facts\",\n    "
        "\"agent_role_prompt\": \"Focuses on available data and past "
        "information, analyzing trends and gaps in knowledge, striving for "
        "an objective viewpoint.\"\n  }\n]\nReturn only the JSON array.";

    t.rubric_originality =
        "You are a helpful assistant and a critical thinker. In this task, "
        "participants were asked to {task_phrase}, a common divergent "
        "thinking task that measures creativity. Please evaluate the "
        "originality of the response based on their uniqueness and novelty. "
        "Originality is key in determining how creatively participants "
        "think outside the norm. Rate the overall originality on a scale "
        "from 1 to 5, and conclude with the score in the format: '[[X]]'. "
        "Consider the following guidance:\n"
        "- 1 point: Very Common - The idea is mundane and frequently "
        "mentioned in everyday contexts. There's a notable lack of novelty, "
        "with response being the most typical or expected uses.\n"
        "- 2 points: Somewhat Common - The idea is somewhat ordinary but "
        "shows slight variations from typical uses, indicating a basic "
        "level of creativity.\n"
        "- 3 points: Moderately Original - The idea displays a fair amount "
        "of creativity and novelty. They are not the usual thoughts but "
        "aren't highly rare or unexpected.\n"
        "- 4 points: Very Original - The idea is significantly unique, "
        "demonstrating a high level of creativity and innovation. They are "
        "unexpected and not commonly considered.\n"
        "- 5 points: Extremely Original - The idea is extraordinarily "
        "unique and rare, displaying a high degree of novelty, creativity, "
        "and unexpectedness. The idea is seldom thought of in typical "
        "contexts.\n"
        "After reviewing the responses, assign an originality score based "
        "on these criteria. Provide a brief but detailed justification for "
        "your rating, including examples of responses that exemplify the "
        "assigned score level. It is extremely important to put the score "
        "in this format: '[[X]]'";
    t.rubric_elaboration =
        "You are a helpful assistant and a critical thinker. Participants "
        "were asked to {task_phrase}. Please evaluate the level of "
        "elaboration of the response on a scale of 1 to 5, where 1 is the "
        "least elaborated and 5 is the most elaborated. Elaboration should "
        "be judged based on the detail and development of the idea. "
        "Conclude with the score in this format: '[[X]]' Consider the "
        "following guidance:\n"
        "1 point: Very Basic - The response is extremely basic with minimal "
        "detail or explanation. Idea is presented in a very simple or "
        "cursory manner.\n"
        "2 points: Somewhat Basic - The response shows a slight degree of "
        "detail, but remains on a basic level. Idea is somewhat developed "
        "but lacks depth.\n"
        "3 points: Moderately Elaborated - The response offers a moderate "
        "level of detail and development. Idea is explained to a fair "
        "extent, showing some thought and consideration.\n"
        "4 points: Highly Elaborated - The response is well-developed and "
        "detailed. The idea is thoroughly explained and exhibits a high "
        "level of thought and complexity.\n"
        "5 points: Exceptionally Elaborated - The response demonstrates "
        "exceptional elaboration. Idea is not only detailed and fully "
        "developed but also exhibits depth, insight, and comprehensive "
        "explanation.\n"
        "After reviewing the responses, assign an elaboration score based "
        "on these criteria. Provide a brief justification for your rating. "
        "It is extremely important to put the score in this format: '[[X]]'";
    t.rubric_fluency =
        "Your task is to evaluate a list of {answer_phrase} provided by "
        "participants, focusing on identifying each unique and practical "
        "use listed. It's important to only consider uses that are relevant "
        "and feasible. Conclude your analysis by stating the total number "
        "of unique, relevant uses in this specific format: [[X]]. Also, "
        "briefly explain how you determined whether a response was relevant "
        "and practical.";
    t.rubric_flexibility =
        "Your task is to assess the range of unique categories or types of "
        "uses suggested in responses regarding the {answer_phrase}. Your "
        "objective is to define and count the distinct categories or "
        "perspectives evident in the responses, and provide a brief "
        "explanation for how you determined these categories. Conclude "
        "your analysis by indicating the total number of unique categories "
        "or perspectives using the format: [[X]].";

    t.task_phrase_aut = "list as many uses for an item as possible";
    t.task_phrase_instances =
        "list as many instances matching a given category as possible";
    t.task_phrase_similarities =
        "list as many similarities between two items as possible";
    t.task_phrase_scientific =
        "propose as many improvements to a common object as possible";
    t.answer_phrase_aut = "uses for a specific item";
    t.answer_phrase_instances = "instances for a specific category";
    t.answer_phrase_similarities = "similarities for a specific pair of items";
    t.answer_phrase_scientific = "improvements for a specific object";

    return t;
}

const std::map<std::string, std::string TemplateSet::*>& TemplateSet::fields() {
    static const std::map<std::string, std::string TemplateSet::*> registry = {
        {"initiation_lead", &TemplateSet::initiation_lead},
        {"discussion_lead", &TemplateSet::discussion_lead},
        {"peer_block_label", &TemplateSet::peer_block_label},
        {"convergence_suffix", &TemplateSet::convergence_suffix},
        {"amap_suffix", &TemplateSet::amap_suffix},
        {"listing_instruction", &TemplateSet::listing_instruction},
        {"goal_aut", &TemplateSet::goal_aut},
        {"goal_instances", &TemplateSet::goal_instances},
        {"goal_similarities", &TemplateSet::goal_similarities},
        {"goal_scientific", &TemplateSet::goal_scientific},
        {"fallback_subject", &TemplateSet::fallback_subject},
        {"variant_1", &TemplateSet::variant_1},
        {"variant_1_rendered", &TemplateSet::variant_1_rendered},
        {"variant_2", &TemplateSet::variant_2},
        {"variant_3", &TemplateSet::variant_3},
        {"variant_4", &TemplateSet::variant_4},
        {"variant_5", &TemplateSet::variant_5},
        {"cot_suffix", &TemplateSet::cot_suffix},
        {"stimuli_suffix", &TemplateSet::stimuli_suffix},
        {"deep_breath_suffix", &TemplateSet::deep_breath_suffix},
        {"few_shot_prefix", &TemplateSet::few_shot_prefix},
        {"debate_update", &TemplateSet::debate_update},
        {"debate_final_suffix", &TemplateSet::debate_final_suffix},
        {"bts_brainstorm", &TemplateSet::bts_brainstorm},
        {"bts_select", &TemplateSet::bts_select},
        {"augment_instruction", &TemplateSet::augment_instruction},
        {"roles_brainstorm", &TemplateSet::roles_brainstorm},
        {"roles_format", &TemplateSet::roles_format},
        {"rubric_originality", &TemplateSet::rubric_originality},
        {"rubric_elaboration", &TemplateSet::rubric_elaboration},
        {"rubric_fluency", &TemplateSet::rubric_fluency},
        {"rubric_flexibility", &TemplateSet::rubric_flexibility},
        {"task_phrase_aut", &TemplateSet::task_phrase_aut},
        {"task_phrase_instances", &TemplateSet::task_phrase_instances},
        {"task_phrase_similarities", &TemplateSet::task_phrase_similarities},
        {"task_phrase_scientific", &TemplateSet::task_phrase_scientific},
        {"answer_phrase_aut", &TemplateSet::answer_phrase_aut},
        {"answer_phrase_instances", &TemplateSet::answer_phrase_instances},
        {"answer_phrase_similarities", &TemplateSet::answer_phrase_similarities},
        {"answer_phrase_scientific", &TemplateSet::answer_phrase_scientific},
    };
    return registry;
}

TemplateSet TemplateSet::load(const std::string& dir) {
    TemplateSet t = builtin();
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw IoError(dir, "not a template directory");
    for (const auto& [name, member] : fields()) {
        fs::path path = fs::path(dir) / (name + ".txt");
        if (!fs::exists(path)) continue;
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError(path.string(), "cannot open template file");
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        if (!text.empty() && text.back() == '\n') text.pop_back();
        t.*member = std::move(text);
    }
    return t;
}

PromptVariant TemplateSet::variant(int variant_id) const {
    PromptVariant v;
    v.variant_id = variant_id;
    switch (variant_id) {
        case 1:
            v.initiation_text = variant_1;
            v.rendered_text = variant_1_rendered;
            return v;
        case 2: v.initiation_text = variant_2; break;
        case 3: v.initiation_text = variant_3; break;
        case 4: v.initiation_text = variant_4; break;
        case 5: v.initiation_text = variant_5; break;
        default:
            throw ConfigError("prompt variant must be in [1, 5], got " +
                              std::to_string(variant_id));
    }
    v.rendered_text = v.initiation_text;
    return v;
}

const std::string& TemplateSet::goal_template(Benchmark b) const {
    switch (b) {
        case Benchmark::aut: return goal_aut;
        case Benchmark::instances: return goal_instances;
        case Benchmark::similarities: return goal_similarities;
        case Benchmark::scientific: return goal_scientific;
    }
    throw ConfigError("unknown benchmark");
}

const std::string& TemplateSet::task_phrase(Benchmark b) const {
    switch (b) {
        case Benchmark::aut: return task_phrase_aut;
        case Benchmark::instances: return task_phrase_instances;
        case Benchmark::similarities: return task_phrase_similarities;
        case Benchmark::scientific: return task_phrase_scientific;
    }
    throw ConfigError("unknown benchmark");
}

const std::string& TemplateSet::answer_phrase(Benchmark b) const {
    switch (b) {
        case Benchmark::aut: return answer_phrase_aut;
        case Benchmark::instances: return answer_phrase_instances;
        case Benchmark::similarities: return answer_phrase_similarities;
        case Benchmark::scientific: return answer_phrase_scientific;
    }
    throw ConfigError("unknown benchmark");
}

std::string render_template(
    std::string_view tmpl,
    const std::vector<std::pair<std::string_view, std::string_view>>& values) {
    std::string out;
    out.reserve(tmpl.size());
    size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            size_t close = tmpl.find('}', i + 1);
            if (close != std::string_view::npos) {
                std::string_view key = tmpl.substr(i + 1, close - i - 1);
                auto it = std::find_if(values.begin(), values.end(),
                                       [&](const auto& p) { return p.first == key; });
                if (it != values.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        out += tmpl[i];
        ++i;
    }
    return out;
}

}  // namespace llmdisc
