#include "llmdisc/judge.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "llmdisc/errors.hpp"

namespace llmdisc {

namespace {

std::string metric_slug(Metric m) {
    std::string s = to_string(m);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string judge_probe(Metric metric, int agent, const std::string& scope,
                        int rep, int attempt) {
    return "judge:" + metric_slug(metric) + ":a" + std::to_string(agent) + ":" +
           scope + ":r" + std::to_string(rep) + ":t" + std::to_string(attempt);
}

ChatRequest judge_request(const std::string& prompt, const JudgeConfig& cfg,
                          const std::string& probe) {
    ChatRequest req;
    req.model = cfg.model;
    req.messages = {{Speaker::user, prompt}};
    req.temperature = cfg.temperature;
    req.top_p = cfg.top_p;
    req.tag = RouteTag{-1, -1, probe};
    return req;
}

ScoreRecord base_record(Metric metric, const AnswerList& answers,
                        const std::string& run_id, const std::string& task_id) {
    ScoreRecord record;
    record.run_id = run_id;
    record.task_id = task_id;
    record.agent_index = answers.agent_index;
    record.metric = metric;
    return record;
}

void run_per_slot(int slots, const std::function<void(int)>& fn) {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(slots);
    workers.reserve(slots);
    for (int i = 0; i < slots; ++i)
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

}  // namespace

void validate(const JudgeConfig& cfg) {
    if (cfg.model.empty()) throw ConfigError("judge model must be non-empty");
    if (cfg.repeats_collective < 1 || cfg.repeats_itemwise < 1)
        throw ConfigError("judge repeats must be >= 1");
    if (cfg.max_parse_retries < 1)
        throw ConfigError("max_parse_retries must be >= 1");
    if (cfg.temperature < 0.0 || cfg.temperature > 2.0)
        throw ConfigError("judge temperature must be in [0, 2]");
}

std::string build_judge_prompt(Metric metric, Benchmark benchmark,
                               const std::vector<std::string>& payload,
                               const TemplateSet& tmpl) {
    if (payload.empty()) throw ConfigError("judge payload must be non-empty");
    if (is_itemwise(metric)) {
        if (payload.size() != 1)
            throw ConfigError(to_string(metric) +
                              " is judged one item at a time; got " +
                              std::to_string(payload.size()) + " items");
        const std::string& rubric = metric == Metric::originality
                                        ? tmpl.rubric_originality
                                        : tmpl.rubric_elaboration;
        return render_template(rubric,
                               {{"task_phrase", tmpl.task_phrase(benchmark)}}) +
               "\n\nResponse: " + payload[0];
    }
    const std::string& rubric = metric == Metric::fluency
                                    ? tmpl.rubric_fluency
                                    : tmpl.rubric_flexibility;
    return render_template(rubric,
                           {{"answer_phrase", tmpl.answer_phrase(benchmark)}}) +
           "\n\nResponses:\n" + render_numbered(payload);
}

double extract_score(const std::string& judge_text) {
    if (judge_text.empty())
        throw ExtractionError("judge text is empty");
    bool found = false;
    double value = 0.0;
    size_t pos = 0;
    while ((pos = judge_text.find("[[", pos)) != std::string::npos) {
        size_t close = judge_text.find("]]", pos + 2);
        if (close == std::string::npos) break;
        std::string inner = judge_text.substr(pos + 2, close - pos - 2);
        size_t b = inner.find_first_not_of(" \t");
        size_t e = inner.find_last_not_of(" \t");
        if (b != std::string::npos) {
            inner = inner.substr(b, e - b + 1);
            try {
                size_t consumed = 0;
                double v = std::stod(inner, &consumed);
                if (consumed == inner.size() && std::isfinite(v)) {
                    value = v;
                    found = true;
                }
            } catch (const std::exception&) {
                // not a number (e.g. the echoed placeholder "[[X]]"); skip
            }
        }
        pos = close + 2;
    }
    if (!found)
        throw ExtractionError("no [[...]] score token in judge text: " +
                              judge_text.substr(0, 120));
    return value;
}

ScoreRecord score_itemwise(Metric metric, const AnswerList& answers,
                           Benchmark benchmark, ChatBackend& backend,
                           const JudgeConfig& cfg, const TemplateSet& tmpl,
                           const std::string& run_id,
                           const std::string& task_id) {
    if (!is_itemwise(metric))
        throw ConfigError(to_string(metric) + " is not an itemwise metric");
    validate(answers);
    validate(cfg);
    ScoreRecord record = base_record(metric, answers, run_id, task_id);
    int n = static_cast<int>(answers.items.size());
    std::vector<std::optional<double>> scores(n);
    std::vector<std::vector<std::string>> raw(n);

    run_per_slot(n, [&](int i) {
        std::string prompt =
            build_judge_prompt(metric, benchmark, {answers.items[i]}, tmpl);
        double sum = 0.0;
        int accepted = 0;
        for (int rep = 0; rep < cfg.repeats_itemwise; ++rep) {
            for (int attempt = 0; attempt < cfg.max_parse_retries; ++attempt) {
                std::string probe = judge_probe(metric, answers.agent_index,
                                                "i" + std::to_string(i), rep,
                                                attempt);
                std::string text =
                    complete_with_retry(backend, judge_request(prompt, cfg, probe))
                        .content;
                raw[i].push_back(text);
                try {
                    double v = extract_score(text);
                    if (v >= 1.0 && v <= 5.0 && v == std::floor(v)) {
                        sum += v;
                        ++accepted;
                        break;
                    }
                } catch (const ExtractionError&) {
                }
            }
        }
        if (accepted > 0) scores[i] = sum / accepted;
    });

    double sum = 0.0;
    int present = 0;
    for (int i = 0; i < n; ++i) {
        for (std::string& text : raw[i])
            record.judge_raw.push_back(std::move(text));
        if (scores[i]) {
            sum += *scores[i];
            ++present;
        } else {
            ++record.missing_items;
        }
    }
    record.item_scores = std::move(scores);
    if (present == 0)
        throw EvaluationError("all " + std::to_string(n) + " items failed " +
                              to_string(metric) + " score extraction");
    record.aggregate = sum / present;
    return record;
}

ScoreRecord score_collective(Metric metric, const AnswerList& answers,
                             Benchmark benchmark, ChatBackend& backend,
                             const JudgeConfig& cfg, const TemplateSet& tmpl,
                             const std::string& run_id,
                             const std::string& task_id) {
    if (is_itemwise(metric))
        throw ConfigError(to_string(metric) + " is not a collective metric");
    validate(answers);
    validate(cfg);
    ScoreRecord record = base_record(metric, answers, run_id, task_id);
    std::string prompt = build_judge_prompt(metric, benchmark, answers.items, tmpl);
    std::vector<double> samples;
    for (int rep = 0; rep < cfg.repeats_collective; ++rep) {
        bool accepted = false;
        for (int attempt = 0; attempt < cfg.max_parse_retries && !accepted;
             ++attempt) {
            std::string probe =
                judge_probe(metric, answers.agent_index, "c", rep, attempt);
            std::string text =
                complete_with_retry(backend, judge_request(prompt, cfg, probe))
                    .content;
            record.judge_raw.push_back(text);
            try {
                double v = extract_score(text);
                if (v >= 0.0) {
                    samples.push_back(v);
                    accepted = true;
                }
            } catch (const ExtractionError&) {
            }
        }
        if (!accepted) ++record.missing_items;
    }
    if (samples.empty())
        throw EvaluationError("all " + std::to_string(cfg.repeats_collective) +
                              " repeats failed " + to_string(metric) +
                              " count extraction");
    double sum = 0.0;
    for (double v : samples) sum += v;
    record.aggregate = sum / samples.size();
    record.collective_samples = std::move(samples);
    return record;
}

AnswerList merge_answer_lists(const std::vector<AnswerList>& lists) {
    if (lists.empty()) throw ConfigError("no answer lists to merge");
    AnswerList merged;
    merged.agent_index = -1;
    merged.parse_mode = ParseMode::enumerated;
    std::set<std::string> seen;
    for (const AnswerList& list : lists)
        for (const std::string& item : list.items)
            if (seen.insert(item).second) merged.items.push_back(item);
    return merged;
}

std::vector<ScoreRecord> evaluate_method_output(
    const MethodOutput& out, Benchmark benchmark, ChatBackend& backend,
    const JudgeConfig& cfg, const TemplateSet& tmpl, bool merged,
    std::vector<EvaluationFailure>* failures) {
    if (out.final_answers.empty())
        throw ConfigError("method output has no answer lists");
    std::vector<AnswerList> lists =
        merged ? std::vector<AnswerList>{merge_answer_lists(out.final_answers)}
               : out.final_answers;
    const Metric metrics[] = {Metric::originality, Metric::elaboration,
                              Metric::fluency, Metric::flexibility};
    std::vector<ScoreRecord> records;
    std::vector<EvaluationFailure> local_failures;
    for (const AnswerList& list : lists) {
        for (Metric metric : metrics) {
            try {
                ScoreRecord record =
                    is_itemwise(metric)
                        ? score_itemwise(metric, list, benchmark, backend, cfg,
                                         tmpl, out.transcript.run_id,
                                         out.transcript.task_id)
                        : score_collective(metric, list, benchmark, backend, cfg,
                                           tmpl, out.transcript.run_id,
                                           out.transcript.task_id);
                records.push_back(std::move(record));
            } catch (const EvaluationError& e) {
                local_failures.push_back({list.agent_index, metric, e.what()});
            }
        }
    }
    if (failures) {
        *failures = std::move(local_failures);
    } else if (!local_failures.empty()) {
        throw EvaluationError(local_failures.front().error);
    }
    return records;
}

}  // namespace llmdisc
