#include "llmdisc/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "llmdisc/errors.hpp"
#include "llmdisc/http_backend.hpp"
#include "llmdisc/judge.hpp"
#include "llmdisc/mock_backend.hpp"
#include "llmdisc/orchestrator.hpp"
#include "llmdisc/roles.hpp"
#include "llmdisc/stats.hpp"
#include "llmdisc/templates.hpp"
#include "llmdisc/transcript.hpp"

#ifndef LLMDISC_DATA_DIR
#define LLMDISC_DATA_DIR ""
#endif

namespace llmdisc::cli {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string fmt(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

// A flag value the enum parser rejects is a usage error, unlike the same
// parse failure on a file produced by an earlier run.
template <typename Parse>
auto flag_value(const Parse& parse) {
    try {
        return parse();
    } catch (const ParseError& e) {
        throw ConfigError(e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open for reading");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": invalid JSON: " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, "cannot open for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError(path, "write failed");
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, "cannot open for writing");
    out << text;
    if (!out) throw IoError(path, "write failed");
}

std::string task_slug(Benchmark b, size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%03zu", index);
    return lower(to_string(b)) + "-" + buf;
}

std::shared_ptr<ChatBackend> default_make_backend(
    BackendKind kind, const std::string& mock_script_path, int max_inflight) {
    if (kind == BackendKind::mock) {
        if (mock_script_path.empty())
            return std::make_shared<MockBackend>();
        return std::make_shared<MockBackend>(MockScript::load(mock_script_path));
    }
    HttpBackendConfig cfg = http_config_from_env();
    cfg.max_inflight = max_inflight;
    return std::make_shared<HttpBackend>(std::move(cfg));
}

struct Io {
    std::ostream& out;
    std::ostream& err;
    std::function<std::shared_ptr<ChatBackend>(BackendKind, const std::string&,
                                               int)>
        make_backend;
};

TemplateSet resolve_templates(const std::string& templates_dir) {
    if (templates_dir.empty()) return TemplateSet::builtin();
    return TemplateSet::load(templates_dir);
}

// ---------------------------------------------------------------- run/sweep

struct RunFlags {
    std::string method = "discussion";
    std::string strategy;
    int rounds = 5;
    int agents = 4;
    std::string model = "gpt-3.5-turbo-0125";
    double temperature = 1.0;
    double top_p = 1.0;
    long seed = 0;
    std::string roles_file;
    bool amap = false;
    std::string backend = "mock";
    int prompt_variant = 1;
    bool no_history = false;
    int bts_candidates = 10;
    int bts_k = 5;
    int max_inflight = 4;

    std::string tasks_file;
    std::string benchmark;
    std::string out_dir = "out";
    std::string run_id;
    std::string mock_script;
    std::string templates_dir;
    int max_attempts = 3;
    double backoff_ms = 250.0;
};

void add_run_flags(CLI::App* sub, RunFlags& f) {
    sub->add_option("--method", f.method,
                    "discussion | debate | single | bts");
    sub->add_option("--strategy", f.strategy,
                    "single-agent strategy: zero_shot | few_shot | cot | "
                    "stimuli | deep_breath");
    sub->add_option("--rounds", f.rounds, "rounds per task");
    sub->add_option("--agents", f.agents, "number of agents");
    sub->add_option("--model", f.model, "model name sent to the backend");
    sub->add_option("--temperature", f.temperature, "sampling temperature");
    sub->add_option("--top-p", f.top_p, "nucleus sampling parameter");
    sub->add_option("--seed", f.seed, "role-rotation seed");
    sub->add_option("--roles", f.roles_file, "role card JSON file");
    sub->add_flag("--amap", f.amap, "ask for as many answers as possible");
    sub->add_option("--backend", f.backend, "mock | openai");
    sub->add_option("--prompt-variant", f.prompt_variant,
                    "initiation sentence variant (1-5)");
    sub->add_flag("--no-history", f.no_history,
                  "do not resend per-agent conversation history");
    sub->add_option("--bts-candidates", f.bts_candidates,
                    "brainstorm candidate count");
    sub->add_option("--bts-k", f.bts_k, "selection size");
    sub->add_option("--max-inflight", f.max_inflight,
                    "concurrent request cap");
    sub->add_option("--tasks", f.tasks_file, "tasks JSON file")->required();
    sub->add_option("--benchmark", f.benchmark,
                    "expected benchmark (cross-checked against the tasks file)");
    sub->add_option("--out", f.out_dir, "output directory");
    sub->add_option("--run-id", f.run_id, "run directory name");
    sub->add_option("--mock-script", f.mock_script,
                    "scripted responses for the mock backend");
    sub->add_option("--templates-dir", f.templates_dir,
                    "prompt template override directory");
    sub->add_option("--max-attempts", f.max_attempts,
                    "attempts per request before giving up");
    sub->add_option("--backoff-ms", f.backoff_ms, "base retry delay");
}

RunConfig config_from_flags(const RunFlags& f) {
    RunConfig cfg;
    cfg.method = flag_value([&] { return method_from_string(f.method); });
    if (!f.strategy.empty())
        cfg.single_strategy =
            flag_value([&] { return single_strategy_from_string(f.strategy); });
    if (cfg.method == Method::single && !cfg.single_strategy)
        throw ConfigError("single method requires --strategy");
    cfg.rounds = f.rounds;
    cfg.agents = f.agents;
    cfg.model = f.model;
    cfg.temperature = f.temperature;
    cfg.top_p = f.top_p;
    cfg.seed = f.seed;
    if (!f.roles_file.empty()) cfg.roles_file = f.roles_file;
    cfg.amap = f.amap;
    cfg.backend = flag_value([&] { return backend_kind_from_string(f.backend); });
    cfg.prompt_variant = f.prompt_variant;
    cfg.use_history = !f.no_history;
    cfg.bts_candidates = f.bts_candidates;
    cfg.bts_k = f.bts_k;
    cfg.max_inflight = f.max_inflight;
    cfg = normalized(cfg);
    validate(cfg);
    return cfg;
}

std::string default_run_id(const RunConfig& cfg, Benchmark benchmark) {
    std::string id = to_string(cfg.method);
    if (cfg.single_strategy) id += "-" + to_string(*cfg.single_strategy);
    id += "-" + lower(to_string(benchmark)) + "-s" + std::to_string(cfg.seed);
    return id;
}

void require_input_file(const std::string& path, const std::string& what) {
    if (!fs::exists(path))
        throw ConfigError(what + " not found: " + path);
}

std::vector<std::optional<RoleCard>> resolve_roles(const RunConfig& cfg) {
    if (!cfg.roles_file) return {};
    if (cfg.method == Method::debate || cfg.method == Method::bts)
        throw ConfigError(to_string(cfg.method) + " does not take role cards");
    require_input_file(*cfg.roles_file, "role file");
    std::vector<RoleCard> set = load_roles(*cfg.roles_file);
    std::vector<RoleCard> assigned = assign_roles(set, cfg.agents, cfg.seed);
    std::vector<std::optional<RoleCard>> out;
    out.reserve(assigned.size());
    for (RoleCard& card : assigned) out.push_back(std::move(card));
    return out;
}

// Runs every task of one configuration, resuming past completed tasks.
// Returns the number of failed tasks.
int run_condition(const RunConfig& cfg, const std::string& run_id,
                  const TaskFile& task_file, const RunFlags& flags, Io& io) {
    TemplateSet tmpl = resolve_templates(flags.templates_dir);
    std::vector<std::optional<RoleCard>> roles = resolve_roles(cfg);
    std::shared_ptr<ChatBackend> backend =
        io.make_backend(cfg.backend, flags.mock_script, cfg.max_inflight);

    fs::path run_dir = fs::path(flags.out_dir) / run_id;
    fs::create_directories(run_dir);
    write_json_file((run_dir / "config.json").string(),
                    json{{"run_id", run_id},
                         {"benchmark", to_string(task_file.benchmark)},
                         {"config", cfg}});

    int failures = 0;
    for (const BenchmarkTask& task : task_file.tasks) {
        fs::path task_dir = run_dir / task.task_id;
        fs::path answers_path = task_dir / "answers.json";
        if (fs::exists(answers_path)) continue;
        fs::create_directories(task_dir);

        Transcript header;
        header.run_id = run_id;
        header.task_id = task.task_id;
        header.config = cfg;
        TranscriptWriter writer((task_dir / "transcript.jsonl").string(), header);
        RunHooks hooks;
        hooks.on_round = [&](const RoundRecord& r) { writer.append_round(r); };

        RunOptions options;
        options.run_id = run_id;
        options.retry.max_attempts = flags.max_attempts;
        options.retry.base_delay_ms = flags.backoff_ms;
        options.roles = roles;
        options.hooks = &hooks;
        try {
            MethodOutput out = run_method(cfg, task, *backend, tmpl, options);
            write_json_file(answers_path.string(),
                            json{{"run_id", run_id},
                                 {"task_id", task.task_id},
                                 {"answers", out.final_answers}});
        } catch (const Error& e) {
            writer.mark_failure(e.what());
            io.err << "task " << task.task_id << " failed: " << e.what() << "\n";
            ++failures;
        }
    }
    return failures;
}

int cmd_run(const RunFlags& flags, Io& io) {
    RunConfig cfg = config_from_flags(flags);
    require_input_file(flags.tasks_file, "tasks file");
    TaskFile task_file = load_tasks_file(flags.tasks_file);
    if (!flags.benchmark.empty() &&
        flag_value([&] { return benchmark_from_string(flags.benchmark); }) !=
            task_file.benchmark)
        throw ConfigError("--benchmark disagrees with the tasks file (" +
                          to_string(task_file.benchmark) + ")");
    std::string run_id = flags.run_id.empty()
                             ? default_run_id(cfg, task_file.benchmark)
                             : flags.run_id;
    int failures = run_condition(cfg, run_id, task_file, flags, io);
    return failures == 0 ? 0 : 1;
}

struct SweepFlags {
    RunFlags base;
    std::string axis;
    std::vector<std::string> values;
    int repetitions = 1;
};

int cmd_sweep(const SweepFlags& sweep, Io& io) {
    if (sweep.values.empty()) throw ConfigError("sweep needs at least one value");
    if (sweep.repetitions < 1)
        throw ConfigError("sweep repetitions must be >= 1");
    require_input_file(sweep.base.tasks_file, "tasks file");
    TaskFile task_file = load_tasks_file(sweep.base.tasks_file);

    int failures = 0;
    for (const std::string& value : sweep.values) {
        RunFlags flags = sweep.base;
        std::string axis = lower(sweep.axis);
        if (axis == "rounds") flags.rounds = std::stoi(value);
        else if (axis == "agents") flags.agents = std::stoi(value);
        else if (axis == "prompt_variant" || axis == "prompt-variant")
            flags.prompt_variant = std::stoi(value);
        else if (axis == "temperature") flags.temperature = std::stod(value);
        else if (axis == "method") flags.method = value;
        else throw ConfigError("unknown sweep axis: " + sweep.axis);

        RunConfig cfg = config_from_flags(flags);
        for (int rep = 0; rep < sweep.repetitions; ++rep) {
            std::string run_id = flags.run_id.empty()
                                     ? default_run_id(cfg, task_file.benchmark)
                                     : flags.run_id;
            run_id += "-" + axis + value;
            if (sweep.repetitions > 1) run_id += "-r" + std::to_string(rep);
            failures += run_condition(cfg, run_id, task_file, flags, io);
        }
    }
    return failures == 0 ? 0 : 1;
}

// ----------------------------------------------------------------- evaluate

std::string item_record_id(const std::string& run_id, const std::string& task_id,
                           int agent, size_t item) {
    return run_id + ":" + task_id + ":a" + std::to_string(agent) + ":i" +
           std::to_string(item);
}

std::string list_record_id(const std::string& run_id, const std::string& task_id,
                           int agent) {
    return run_id + ":" + task_id + ":a" + std::to_string(agent) + ":list";
}

int metric_order(Metric m) { return static_cast<int>(m); }

struct EvaluateFlags {
    std::string run_dir;
    std::string judge_model = "gpt-3.5-turbo-0125";
    double judge_temperature = 1.0;
    double judge_top_p = 1.0;
    int repeats_collective = 3;
    int repeats_itemwise = 1;
    int max_parse_retries = 3;
    std::string judge_backend = "mock";
    std::string mock_script;
    bool merged = false;
    std::string csv_path;
    std::string templates_dir;
    int max_inflight = 4;
};

std::vector<fs::path> sorted_task_dirs(const fs::path& run_dir) {
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(run_dir))
        if (entry.is_directory()) dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    return dirs;
}

std::vector<AnswerList> load_answers_file(const fs::path& path) {
    json j = read_json_file(path.string());
    return j.at("answers").get<std::vector<AnswerList>>();
}

std::string metrics_csv(const std::vector<ScoreRecord>& records,
                        const std::map<std::string, std::vector<AnswerList>>&
                            answers_by_task) {
    std::ostringstream out;
    out << "record_id,run_id,task_id,agent_index,metric,item_index,item,score\n";
    auto escape = [](const std::string& s) {
        std::string quoted = "\"";
        for (char c : s) {
            if (c == '"') quoted += "\"\"";
            else quoted += c;
        }
        quoted += "\"";
        return quoted;
    };
    for (const ScoreRecord& r : records) {
        const std::vector<AnswerList>* lists = nullptr;
        auto it = answers_by_task.find(r.task_id);
        if (it != answers_by_task.end()) lists = &it->second;
        if (r.item_scores) {
            for (size_t i = 0; i < r.item_scores->size(); ++i) {
                std::string item;
                if (lists)
                    for (const AnswerList& list : *lists)
                        if (list.agent_index == r.agent_index &&
                            i < list.items.size())
                            item = list.items[i];
                out << item_record_id(r.run_id, r.task_id, r.agent_index, i)
                    << ',' << r.run_id << ',' << r.task_id << ','
                    << r.agent_index << ',' << to_string(r.metric) << ',' << i
                    << ',' << escape(item) << ',';
                if ((*r.item_scores)[i]) out << *(*r.item_scores)[i];
                out << '\n';
            }
        } else {
            out << list_record_id(r.run_id, r.task_id, r.agent_index) << ','
                << r.run_id << ',' << r.task_id << ',' << r.agent_index << ','
                << to_string(r.metric) << ",-1,," << r.aggregate << '\n';
        }
    }
    return out.str();
}

int cmd_evaluate(const EvaluateFlags& flags, Io& io) {
    require_input_file(flags.run_dir, "run directory");
    fs::path run_dir(flags.run_dir);
    require_input_file((run_dir / "config.json").string(), "run config");
    json run_config = read_json_file((run_dir / "config.json").string());
    Benchmark benchmark =
        benchmark_from_string(run_config.at("benchmark").get<std::string>());
    std::string run_id = run_config.at("run_id").get<std::string>();

    JudgeConfig jcfg;
    jcfg.model = flags.judge_model;
    jcfg.temperature = flags.judge_temperature;
    jcfg.top_p = flags.judge_top_p;
    jcfg.repeats_collective = flags.repeats_collective;
    jcfg.repeats_itemwise = flags.repeats_itemwise;
    jcfg.max_parse_retries = flags.max_parse_retries;
    validate(jcfg);
    TemplateSet tmpl = resolve_templates(flags.templates_dir);
    std::shared_ptr<ChatBackend> backend = io.make_backend(
        flag_value([&] { return backend_kind_from_string(flags.judge_backend); }),
        flags.mock_script, flags.max_inflight);

    std::vector<fs::path> task_dirs = sorted_task_dirs(run_dir);
    std::vector<std::string> missing;
    for (const fs::path& dir : task_dirs)
        if (!fs::exists(dir / "answers.json"))
            missing.push_back(dir.filename().string());
    if (!missing.empty()) {
        std::string list;
        for (const std::string& m : missing) list += " " + m;
        throw Error("tasks without parsed answers:" + list);
    }
    if (task_dirs.empty())
        throw Error("run directory has no task outputs: " + flags.run_dir);

    const Metric metrics[] = {Metric::originality, Metric::elaboration,
                              Metric::fluency, Metric::flexibility};
    int failures = 0;
    std::vector<ScoreRecord> all_records;
    std::map<std::string, std::vector<AnswerList>> answers_by_task;

    for (const fs::path& dir : task_dirs) {
        std::string task_id = dir.filename().string();
        std::vector<AnswerList> lists = load_answers_file(dir / "answers.json");
        answers_by_task[task_id] = lists;
        if (flags.merged) lists = {merge_answer_lists(lists)};

        fs::path scores_path = dir / "scores.json";
        std::vector<ScoreRecord> records;
        std::set<std::pair<int, std::string>> done;
        if (fs::exists(scores_path)) {
            records = read_json_file(scores_path.string())
                          .get<std::vector<ScoreRecord>>();
            for (const ScoreRecord& r : records)
                done.insert({r.agent_index, to_string(r.metric)});
        }
        for (const AnswerList& list : lists) {
            for (Metric metric : metrics) {
                if (done.count({list.agent_index, to_string(metric)})) continue;
                try {
                    ScoreRecord record =
                        is_itemwise(metric)
                            ? score_itemwise(metric, list, benchmark, *backend,
                                             jcfg, tmpl, run_id, task_id)
                            : score_collective(metric, list, benchmark, *backend,
                                               jcfg, tmpl, run_id, task_id);
                    records.push_back(std::move(record));
                } catch (const EvaluationError& e) {
                    io.err << "record (" << task_id << ", agent "
                           << list.agent_index << ", " << to_string(metric)
                           << ") failed: " << e.what() << "\n";
                    ++failures;
                }
            }
        }
        std::sort(records.begin(), records.end(),
                  [](const ScoreRecord& a, const ScoreRecord& b) {
                      return std::tie(a.task_id, a.agent_index) <
                                     std::tie(b.task_id, b.agent_index) ||
                             (a.task_id == b.task_id &&
                              a.agent_index == b.agent_index &&
                              metric_order(a.metric) < metric_order(b.metric));
                  });
        write_json_file(scores_path.string(), json(records));
        for (ScoreRecord& r : records) all_records.push_back(std::move(r));
    }

    if (!flags.csv_path.empty())
        write_text_file(flags.csv_path, metrics_csv(all_records, answers_by_task));
    return failures == 0 ? 0 : 1;
}

// ------------------------------------------------------------- report/stats

struct HumanRating {
    std::string rater;
    std::string record;
    Metric metric = Metric::originality;
    double score = 0.0;
};

std::vector<HumanRating> load_human_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open human ratings CSV");
    std::vector<HumanRating> ratings;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        for (char c : line) {
            if (c == ',') {
                cells.push_back(cell);
                cell.clear();
            } else {
                cell += c;
            }
        }
        cells.push_back(cell);
        if (line_no == 1 && cells.size() >= 4 && trim(lower(cells[0])) == "rater_id")
            continue;
        if (cells.size() != 4)
            throw ParseError(path + ": line " + std::to_string(line_no) +
                             ": expected rater_id,record_id,metric,score");
        HumanRating r;
        r.rater = trim(cells[0]);
        r.record = trim(cells[1]);
        r.metric = metric_from_string(trim(cells[2]));
        try {
            r.score = std::stod(trim(cells[3]));
        } catch (const std::exception&) {
            throw ParseError(path + ": line " + std::to_string(line_no) +
                             ": bad score '" + cells[3] + "'");
        }
        ratings.push_back(std::move(r));
    }
    return ratings;
}

struct RunData {
    std::string label;
    Benchmark benchmark = Benchmark::aut;
    std::vector<ScoreRecord> records;                 // all score records
    std::map<std::string, std::vector<AnswerList>> answers;  // by task
};

RunData load_run_data(const std::string& dir) {
    require_input_file(dir, "run directory");
    require_input_file((fs::path(dir) / "config.json").string(), "run config");
    json config = read_json_file((fs::path(dir) / "config.json").string());
    RunData data;
    data.label = config.at("run_id").get<std::string>();
    data.benchmark =
        benchmark_from_string(config.at("benchmark").get<std::string>());
    for (const fs::path& task_dir : sorted_task_dirs(dir)) {
        fs::path scores = task_dir / "scores.json";
        if (fs::exists(scores)) {
            auto records =
                read_json_file(scores.string()).get<std::vector<ScoreRecord>>();
            for (ScoreRecord& r : records) data.records.push_back(std::move(r));
        }
        fs::path answers = task_dir / "answers.json";
        if (fs::exists(answers))
            data.answers[task_dir.filename().string()] =
                load_answers_file(answers);
    }
    return data;
}

// Per-agent records when any exist, otherwise the merged (-1) records.
std::vector<const ScoreRecord*> table_records(const RunData& run) {
    std::vector<const ScoreRecord*> per_agent, merged;
    for (const ScoreRecord& r : run.records)
        (r.agent_index >= 0 ? per_agent : merged).push_back(&r);
    return per_agent.empty() ? merged : per_agent;
}

const Metric kMetrics[] = {Metric::originality, Metric::elaboration,
                           Metric::fluency, Metric::flexibility};

struct ReportRow {
    Benchmark benchmark;
    std::string label;
    std::map<std::string, MeanStd> cells;  // by metric name
    std::map<std::string, size_t> counts;
    MeanStd word_count;
    size_t word_samples = 0;
};

std::vector<ReportRow> build_rows(const std::vector<RunData>& runs) {
    std::vector<ReportRow> rows;
    for (const RunData& run : runs) {
        ReportRow row;
        row.benchmark = run.benchmark;
        row.label = run.label;
        for (Metric metric : kMetrics) {
            std::vector<double> aggregates;
            for (const ScoreRecord* r : table_records(run))
                if (r->metric == metric) aggregates.push_back(r->aggregate);
            if (!aggregates.empty()) {
                row.cells[to_string(metric)] = mean_std(aggregates);
                row.counts[to_string(metric)] = aggregates.size();
            }
        }
        std::vector<double> counts;
        for (const auto& [task, lists] : run.answers)
            for (const AnswerList& list : lists)
                for (const std::string& item : list.items)
                    counts.push_back(static_cast<double>(word_count(item)));
        if (!counts.empty()) {
            row.word_count = mean_std(counts);
            row.word_samples = counts.size();
        }
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        return std::tie(a.benchmark, a.label) < std::tie(b.benchmark, b.label);
    });
    return rows;
}

struct CorrelationRow {
    std::string metric;
    std::optional<double> llm_human_tau;
    std::optional<double> human_human_tau;
    size_t pairs = 0;
};

// LLM score per record id: itemwise scores indexed per item, collective
// aggregates per list.
std::map<std::string, double> llm_scores_by_record(
    const std::vector<RunData>& runs, Metric metric) {
    std::map<std::string, double> out;
    for (const RunData& run : runs)
        for (const ScoreRecord& r : run.records) {
            if (r.metric != metric) continue;
            if (r.item_scores) {
                for (size_t i = 0; i < r.item_scores->size(); ++i)
                    if ((*r.item_scores)[i])
                        out[item_record_id(r.run_id, r.task_id, r.agent_index,
                                           i)] = *(*r.item_scores)[i];
            } else {
                out[list_record_id(r.run_id, r.task_id, r.agent_index)] =
                    r.aggregate;
            }
        }
    return out;
}

std::vector<CorrelationRow> correlate_with_humans(
    const std::vector<RunData>& runs, const std::vector<HumanRating>& humans,
    std::ostream& err) {
    std::vector<CorrelationRow> rows;
    for (Metric metric : kMetrics) {
        CorrelationRow row;
        row.metric = to_string(metric);
        std::map<std::string, std::map<std::string, double>> by_record;
        for (const HumanRating& h : humans)
            if (h.metric == metric) by_record[h.record][h.rater] = h.score;
        if (by_record.empty()) continue;

        std::map<std::string, double> llm = llm_scores_by_record(runs, metric);
        PairedSeries lh;
        for (const auto& [record, raters] : by_record) {
            auto it = llm.find(record);
            if (it == llm.end()) continue;
            double sum = 0.0;
            for (const auto& [rater, score] : raters) sum += score;
            lh.x.push_back(it->second);
            lh.y.push_back(sum / raters.size());
        }
        row.pairs = lh.x.size();
        if (lh.x.size() >= 2) {
            try {
                row.llm_human_tau = kendall_tau(lh);
            } catch (const StatsError& e) {
                err << "warning: " << row.metric << " judge-human tau: "
                    << e.what() << "\n";
            }
        }

        std::set<std::string> raters;
        for (const auto& [record, by_rater] : by_record)
            for (const auto& [rater, score] : by_rater) raters.insert(rater);
        std::vector<double> taus;
        for (const std::string& rater : raters) {
            PairedSeries hh;
            for (const auto& [record, by_rater] : by_record) {
                auto self = by_rater.find(rater);
                if (self == by_rater.end() || by_rater.size() < 2) continue;
                double sum = 0.0;
                for (const auto& [r, score] : by_rater)
                    if (r != rater) sum += score;
                hh.x.push_back(self->second);
                hh.y.push_back(sum / (by_rater.size() - 1));
            }
            if (hh.x.size() < 2) continue;
            try {
                taus.push_back(kendall_tau(hh));
            } catch (const StatsError&) {
            }
        }
        if (!taus.empty())
            row.human_human_tau = mean_std(taus).mean;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string correlation_markdown(const std::vector<CorrelationRow>& rows) {
    std::ostringstream md;
    md << "## Correlation with human ratings\n\n";
    md << "Kendall tau-b, pooled over items. Human-human is each rater "
          "against the mean of the others, averaged.\n\n";
    md << "| Metric | Judge-Human tau | Strength | Human-Human tau | "
          "Strength | Pairs |\n";
    md << "|---|---|---|---|---|---|\n";
    for (const CorrelationRow& row : rows) {
        md << "| " << row.metric << " | ";
        if (row.llm_human_tau)
            md << fmt(*row.llm_human_tau, 4) << " | "
               << to_string(strength_label(std::abs(*row.llm_human_tau)));
        else
            md << "- | -";
        md << " | ";
        if (row.human_human_tau)
            md << fmt(*row.human_human_tau, 4) << " | "
               << to_string(strength_label(std::abs(*row.human_human_tau)));
        else
            md << "- | -";
        md << " | " << row.pairs << " |\n";
    }
    return md.str();
}

json correlation_json(const std::vector<CorrelationRow>& rows) {
    json arr = json::array();
    for (const CorrelationRow& row : rows) {
        json j{{"metric", row.metric}, {"pairs", row.pairs}};
        if (row.llm_human_tau) {
            j["llm_human_tau"] = *row.llm_human_tau;
            j["llm_human_strength"] =
                to_string(strength_label(std::abs(*row.llm_human_tau)));
        }
        if (row.human_human_tau) {
            j["human_human_tau"] = *row.human_human_tau;
            j["human_human_strength"] =
                to_string(strength_label(std::abs(*row.human_human_tau)));
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

struct ReportFlags {
    std::vector<std::string> run_dirs;
    std::string out_path = "report.md";
    std::string json_path;
    std::string human_csv;
};

int cmd_report(const ReportFlags& flags, Io& io) {
    std::vector<RunData> runs;
    for (const std::string& dir : flags.run_dirs) runs.push_back(load_run_data(dir));
    std::vector<ReportRow> rows = build_rows(runs);
    if (rows.empty()) throw Error("no score records found in the given run dirs");

    std::vector<std::string> columns;
    for (Metric metric : kMetrics) {
        std::string name = to_string(metric);
        bool present = false;
        for (const ReportRow& row : rows) present |= row.cells.count(name) > 0;
        if (present)
            columns.push_back(name);
        else
            io.err << "warning: no " << name << " records anywhere; column omitted\n";
    }

    // Rows holding the per-benchmark maximum mean, bolded for the two
    // itemwise metrics.
    std::set<std::pair<std::string, const ReportRow*>> bold;
    for (const std::string& name : {std::string("Originality"),
                                    std::string("Elaboration")}) {
        std::map<Benchmark, double> best;
        for (const ReportRow& row : rows) {
            auto it = row.cells.find(name);
            if (it == row.cells.end()) continue;
            auto [pos, inserted] = best.try_emplace(row.benchmark,
                                                    it->second.mean);
            if (!inserted) pos->second = std::max(pos->second, it->second.mean);
        }
        for (const ReportRow& row : rows) {
            auto it = row.cells.find(name);
            if (it != row.cells.end() &&
                it->second.mean == best.at(row.benchmark))
                bold.insert({name, &row});
        }
    }

    std::ostringstream md;
    md << "# Score summary\n\n";
    md << "Cells are mean \xC2\xB1 std of record aggregates. The highest "
          "Originality and Elaboration per benchmark are bold.\n\n";
    md << "| Benchmark | Run |";
    for (const std::string& c : columns) md << " " << c << " |";
    md << "\n|---|---|";
    for (size_t i = 0; i < columns.size(); ++i) md << "---|";
    md << "\n";
    for (const ReportRow& row : rows) {
        md << "| " << to_string(row.benchmark) << " | " << row.label << " |";
        for (const std::string& c : columns) {
            auto it = row.cells.find(c);
            if (it == row.cells.end()) {
                md << " - |";
                continue;
            }
            std::string cell = fmt(it->second.mean, 2) + " \xC2\xB1 " +
                               fmt(it->second.std, 2);
            if (bold.count({c, &row})) cell = "**" + cell + "**";
            md << " " << cell << " |";
        }
        md << "\n";
    }

    md << "\n## Word counts\n\n";
    md << "| Benchmark | Run | Words per answer | Answers |\n|---|---|---|---|\n";
    for (const ReportRow& row : rows) {
        md << "| " << to_string(row.benchmark) << " | " << row.label << " | ";
        if (row.word_samples)
            md << fmt(row.word_count.mean, 2) << " \xC2\xB1 "
               << fmt(row.word_count.std, 2);
        else
            md << "-";
        md << " | " << row.word_samples << " |\n";
    }

    std::vector<CorrelationRow> correlation;
    if (!flags.human_csv.empty()) {
        require_input_file(flags.human_csv, "human ratings CSV");
        correlation =
            correlate_with_humans(runs, load_human_csv(flags.human_csv), io.err);
        md << "\n" << correlation_markdown(correlation);
    }

    std::string rendered = md.str();
    write_text_file(flags.out_path, rendered);
    io.out << rendered;

    if (!flags.json_path.empty()) {
        json jrows = json::array();
        for (const ReportRow& row : rows) {
            json cells = json::object();
            for (const auto& [name, cell] : row.cells)
                cells[name] = json{{"mean", cell.mean},
                                   {"std", cell.std},
                                   {"records", row.counts.at(name)}};
            json jrow{{"benchmark", to_string(row.benchmark)},
                      {"run", row.label},
                      {"metrics", std::move(cells)}};
            if (row.word_samples)
                jrow["word_count"] = json{{"mean", row.word_count.mean},
                                          {"std", row.word_count.std},
                                          {"answers", row.word_samples}};
            jrows.push_back(std::move(jrow));
        }
        json out{{"rows", std::move(jrows)}};
        if (!correlation.empty()) out["correlation"] = correlation_json(correlation);
        write_json_file(flags.json_path, out);
    }
    return 0;
}

struct StatsFlags {
    std::vector<std::string> run_dirs;
    std::string human_csv;
    bool self_bleu = false;
    std::string out_path = "stats.md";
    std::string json_path;
};

int cmd_stats(const StatsFlags& flags, Io& io) {
    std::vector<RunData> runs;
    for (const std::string& dir : flags.run_dirs) runs.push_back(load_run_data(dir));

    std::ostringstream md;
    json out = json::object();
    md << "# Statistics\n";

    // Pearson correlation between answer length and judge score: per item
    // for itemwise metrics, per list (total words vs aggregate) otherwise.
    md << "\n## Word count vs score (Pearson r)\n\n";
    md << "| Metric | r | n |\n|---|---|---|\n";
    json word_corr = json::array();
    for (Metric metric : kMetrics) {
        PairedSeries series;
        for (const RunData& run : runs) {
            for (const ScoreRecord& r : run.records) {
                if (r.metric != metric) continue;
                auto answers = run.answers.find(r.task_id);
                if (answers == run.answers.end()) continue;
                const AnswerList* list = nullptr;
                for (const AnswerList& candidate : answers->second)
                    if (candidate.agent_index == r.agent_index) list = &candidate;
                if (!list) continue;
                if (r.item_scores) {
                    for (size_t i = 0;
                         i < r.item_scores->size() && i < list->items.size(); ++i)
                        if ((*r.item_scores)[i]) {
                            series.x.push_back(static_cast<double>(
                                word_count(list->items[i])));
                            series.y.push_back(*(*r.item_scores)[i]);
                        }
                } else {
                    long total = 0;
                    for (const std::string& item : list->items)
                        total += word_count(item);
                    series.x.push_back(static_cast<double>(total));
                    series.y.push_back(r.aggregate);
                }
            }
        }
        if (series.x.size() < 2) {
            io.err << "warning: not enough data for " << to_string(metric)
                   << " word-count correlation\n";
            continue;
        }
        try {
            double r = pearson_r(series);
            md << "| " << to_string(metric) << " | " << fmt(r, 4) << " | "
               << series.x.size() << " |\n";
            word_corr.push_back(json{{"metric", to_string(metric)},
                                     {"pearson_r", r},
                                     {"n", series.x.size()}});
        } catch (const StatsError& e) {
            io.err << "warning: " << to_string(metric) << ": " << e.what()
                   << "\n";
        }
    }
    out["word_count_correlation"] = std::move(word_corr);

    if (!flags.human_csv.empty()) {
        require_input_file(flags.human_csv, "human ratings CSV");
        std::vector<CorrelationRow> rows =
            correlate_with_humans(runs, load_human_csv(flags.human_csv), io.err);
        md << "\n" << correlation_markdown(rows);
        out["correlation"] = correlation_json(rows);
    }

    if (flags.self_bleu) {
        md << "\n## Self-BLEU of final responses\n\n";
        md << "| Run | Self-BLEU | Responses |\n|---|---|---|\n";
        json rows = json::array();
        for (size_t i = 0; i < runs.size(); ++i) {
            std::vector<std::string> corpus;
            for (const fs::path& task_dir :
                 sorted_task_dirs(flags.run_dirs[i])) {
                fs::path transcript = task_dir / "transcript.jsonl";
                if (!fs::exists(transcript)) continue;
                Transcript t = read_transcript_file(transcript.string());
                if (t.rounds.empty()) continue;
                for (const TranscriptEntry& e : t.rounds.back().entries)
                    corpus.push_back(e.response);
            }
            try {
                double score = self_bleu(corpus);
                md << "| " << runs[i].label << " | " << fmt(score, 4) << " | "
                   << corpus.size() << " |\n";
                rows.push_back(json{{"run", runs[i].label},
                                    {"self_bleu", score},
                                    {"responses", corpus.size()}});
            } catch (const StatsError& e) {
                io.err << "warning: " << runs[i].label << ": " << e.what()
                       << "\n";
            }
        }
        out["self_bleu"] = std::move(rows);
    }

    std::string rendered = md.str();
    write_text_file(flags.out_path, rendered);
    io.out << rendered;
    if (!flags.json_path.empty()) write_json_file(flags.json_path, out);
    return 0;
}

// ------------------------------------------------------- generation commands

struct AugmentFlags {
    std::string benchmark;
    int n = 30;
    std::string seed_tasks;
    std::string out_path;
    std::string backend = "mock";
    std::string mock_script;
    std::string model = "gpt-3.5-turbo-0125";
    double temperature = 1.0;
    std::string templates_dir;
};

int cmd_augment_tasks(const AugmentFlags& flags, Io& io) {
    if (flags.n < 1) throw ConfigError("--n must be >= 1");
    Benchmark benchmark =
        flag_value([&] { return benchmark_from_string(flags.benchmark); });
    std::string seed_path =
        flags.seed_tasks.empty()
            ? data_dir() + "/tasks/" + lower(to_string(benchmark)) + ".json"
            : flags.seed_tasks;
    require_input_file(seed_path, "seed tasks file");
    TaskFile seeds = load_tasks_file(seed_path);
    if (seeds.benchmark != benchmark)
        throw ConfigError("seed tasks file is for " +
                          to_string(seeds.benchmark));

    TemplateSet tmpl = resolve_templates(flags.templates_dir);
    std::vector<std::string> samples;
    for (const BenchmarkTask& t : seeds.tasks) samples.push_back(t.text);
    std::string prompt =
        render_template(tmpl.augment_instruction,
                        {{"benchmark", to_string(benchmark)},
                         {"samples", render_numbered(samples)},
                         {"n", std::to_string(flags.n)}});

    std::shared_ptr<ChatBackend> backend = io.make_backend(
        flag_value([&] { return backend_kind_from_string(flags.backend); }),
        flags.mock_script, 4);
    ChatRequest req;
    req.model = flags.model;
    req.messages = {{Speaker::user, prompt}};
    req.temperature = flags.temperature;
    req.top_p = 1.0;
    req.tag = RouteTag{-1, -1, "augment"};
    std::string response = complete_with_retry(*backend, req).content;

    AnswerList parsed = parse_final_answers(response, 0);
    validate(parsed);
    std::string out_path =
        flags.out_path.empty()
            ? "generated_" + lower(to_string(benchmark)) + ".json"
            : flags.out_path;
    write_json_file(out_path, json{{"benchmark", to_string(benchmark)},
                                   {"tasks", parsed.items},
                                   {"generated", true},
                                   {"reviewed", false}});
    if (static_cast<int>(parsed.items.size()) < flags.n) {
        io.err << "generated only " << parsed.items.size() << " of " << flags.n
               << " tasks (written to " << out_path << ")\n";
        return 1;
    }
    io.out << "wrote " << parsed.items.size() << " tasks to " << out_path
           << " (review before use)\n";
    return 0;
}

struct GenRolesFlags {
    int n = 10;
    std::string out_path = "roles_generated.json";
    std::string backend = "mock";
    std::string mock_script;
    std::string model = "gpt-3.5-turbo-0125";
    double temperature = 1.0;
    int max_parse_retries = 3;
    std::string templates_dir;
};

std::string strip_code_fences(const std::string& text) {
    std::string t = trim(text);
    if (t.rfind("```", 0) == 0) {
        size_t first_newline = t.find('\n');
        size_t last_fence = t.rfind("```");
        if (first_newline != std::string::npos && last_fence > first_newline)
            t = trim(t.substr(first_newline + 1, last_fence - first_newline - 1));
    }
    size_t bracket = t.find('[');
    size_t last = t.rfind(']');
    if (bracket != std::string::npos && last != std::string::npos && last > bracket)
        t = t.substr(bracket, last - bracket + 1);
    return t;
}

int cmd_gen_roles(const GenRolesFlags& flags, Io& io) {
    if (flags.n < 1) throw ConfigError("--n must be >= 1");
    TemplateSet tmpl = resolve_templates(flags.templates_dir);
    std::shared_ptr<ChatBackend> backend = io.make_backend(
        flag_value([&] { return backend_kind_from_string(flags.backend); }),
        flags.mock_script, 4);

    std::string brainstorm_prompt = render_template(
        tmpl.roles_brainstorm, {{"n", std::to_string(flags.n)}});
    ChatRequest brainstorm;
    brainstorm.model = flags.model;
    brainstorm.messages = {{Speaker::user, brainstorm_prompt}};
    brainstorm.temperature = flags.temperature;
    brainstorm.top_p = 1.0;
    brainstorm.tag = RouteTag{-1, -1, "roles:brainstorm:t0"};
    std::string personas = complete_with_retry(*backend, brainstorm).content;

    std::string last_raw;
    for (int attempt = 0; attempt < flags.max_parse_retries; ++attempt) {
        ChatRequest format;
        format.model = flags.model;
        format.messages = {{Speaker::user, brainstorm_prompt},
                           {Speaker::assistant, personas},
                           {Speaker::user, tmpl.roles_format}};
        format.temperature = flags.temperature;
        format.top_p = 1.0;
        format.tag = RouteTag{-1, -1, "roles:format:t" + std::to_string(attempt)};
        last_raw = complete_with_retry(*backend, format).content;
        try {
            json j = json::parse(strip_code_fences(last_raw));
            std::vector<RoleCard> cards = parse_roles(j, "generated roles");
            write_json_file(flags.out_path, json(cards));
            io.out << "wrote " << cards.size() << " role cards to "
                   << flags.out_path << "\n";
            return 0;
        } catch (const json::parse_error& e) {
            io.err << "attempt " << attempt + 1 << ": not valid JSON: "
                   << e.what() << "\n";
        } catch (const ParseError& e) {
            io.err << "attempt " << attempt + 1 << ": " << e.what() << "\n";
        }
    }
    std::string raw_path = flags.out_path + ".raw.txt";
    write_text_file(raw_path, last_raw);
    io.err << "role generation failed schema validation after "
           << flags.max_parse_retries << " attempts; raw output saved to "
           << raw_path << "\n";
    return 1;
}

}  // namespace

std::string data_dir() {
    if (const char* env = std::getenv("LLMDISC_DATA_DIR")) return env;
    return LLMDISC_DATA_DIR;
}

TaskFile load_tasks_file(const std::string& path) {
    json j = read_json_file(path);
    if (!j.is_object() || !j.contains("benchmark") || !j.contains("tasks"))
        throw ParseError(path + ": tasks file needs 'benchmark' and 'tasks'");
    TaskFile file;
    file.benchmark = benchmark_from_string(j.at("benchmark").get<std::string>());
    if (!j.at("tasks").is_array() || j.at("tasks").empty())
        throw ParseError(path + ": 'tasks' must be a non-empty array");
    size_t index = 0;
    for (const json& t : j.at("tasks")) {
        if (!t.is_string())
            throw ParseError(path + ": task " + std::to_string(index) +
                             " must be a string");
        BenchmarkTask task;
        task.benchmark = file.benchmark;
        task.task_id = task_slug(file.benchmark, index);
        task.text = t.get<std::string>();
        validate(task);
        file.tasks.push_back(std::move(task));
        ++index;
    }
    return file;
}

int run_cli(const std::vector<std::string>& args, const Deps* deps) {
    Io io{deps && deps->out ? *deps->out : std::cout,
          deps && deps->err ? *deps->err : std::cerr,
          deps && deps->make_backend ? deps->make_backend
                                     : default_make_backend};

    CLI::App app{"Multi-agent discussion experiments with LLM-as-judge "
                 "creativity scoring"};
    app.require_subcommand(1);

    RunFlags run_flags;
    CLI::App* run = app.add_subcommand("run", "execute one experiment");
    run->set_config("--config");
    add_run_flags(run, run_flags);

    SweepFlags sweep_flags;
    CLI::App* sweep =
        app.add_subcommand("sweep", "run one config axis over several values");
    sweep->set_config("--config");
    add_run_flags(sweep, sweep_flags.base);
    sweep->add_option("--axis", sweep_flags.axis,
                      "rounds | agents | prompt_variant | temperature | method")
        ->required();
    sweep->add_option("--values", sweep_flags.values, "axis values")
        ->required()
        ->delimiter(',');
    sweep->add_option("--repetitions", sweep_flags.repetitions,
                      "repeated runs per value");

    EvaluateFlags eval_flags;
    CLI::App* evaluate =
        app.add_subcommand("evaluate", "judge parsed answers in a run directory");
    evaluate->set_config("--config");
    evaluate->add_option("run_dir", eval_flags.run_dir, "run directory")
        ->required();
    evaluate->add_option("--judge-model", eval_flags.judge_model, "judge model");
    evaluate->add_option("--judge-temperature", eval_flags.judge_temperature,
                         "judge sampling temperature");
    evaluate->add_option("--judge-top-p", eval_flags.judge_top_p,
                         "judge nucleus sampling");
    evaluate->add_option("--repeats-collective", eval_flags.repeats_collective,
                         "judge repeats for Fluency/Flexibility");
    evaluate->add_option("--repeats-itemwise", eval_flags.repeats_itemwise,
                         "judge repeats per item");
    evaluate->add_option("--max-parse-retries", eval_flags.max_parse_retries,
                         "attempts per sample before marking it missing");
    evaluate->add_option("--judge-backend", eval_flags.judge_backend,
                         "mock | openai");
    evaluate->add_option("--mock-script", eval_flags.mock_script,
                         "scripted judge responses");
    evaluate->add_flag("--merged", eval_flags.merged,
                       "score the merged team list instead of per-agent lists");
    evaluate->add_option("--csv", eval_flags.csv_path,
                         "write per-item scores as CSV");
    evaluate->add_option("--templates-dir", eval_flags.templates_dir,
                         "prompt template override directory");
    evaluate->add_option("--max-inflight", eval_flags.max_inflight,
                         "concurrent request cap");

    ReportFlags report_flags;
    CLI::App* report =
        app.add_subcommand("report", "summarize scored runs as a table");
    report->set_config("--config");
    report->add_option("run_dirs", report_flags.run_dirs, "scored run dirs")
        ->required();
    report->add_option("--out", report_flags.out_path, "markdown output path");
    report->add_option("--json", report_flags.json_path, "JSON output path");
    report->add_option("--human-csv", report_flags.human_csv,
                       "human ratings (rater_id,record_id,metric,score)");

    StatsFlags stats_flags;
    CLI::App* stats =
        app.add_subcommand("stats", "correlation and diversity statistics");
    stats->set_config("--config");
    stats->add_option("run_dirs", stats_flags.run_dirs, "scored run dirs")
        ->required();
    stats->add_option("--human-csv", stats_flags.human_csv,
                      "human ratings (rater_id,record_id,metric,score)");
    stats->add_flag("--self-bleu", stats_flags.self_bleu,
                    "self-BLEU over final-round responses");
    stats->add_option("--out", stats_flags.out_path, "markdown output path");
    stats->add_option("--json", stats_flags.json_path, "JSON output path");

    AugmentFlags augment_flags;
    CLI::App* augment =
        app.add_subcommand("augment-tasks", "generate additional benchmark tasks");
    augment->set_config("--config");
    augment->add_option("--benchmark", augment_flags.benchmark, "benchmark name")
        ->required();
    augment->add_option("--n", augment_flags.n, "number of tasks to request");
    augment->add_option("--seed-tasks", augment_flags.seed_tasks,
                        "sample tasks file (default: bundled)");
    augment->add_option("--out", augment_flags.out_path, "output tasks file");
    augment->add_option("--backend", augment_flags.backend, "mock | openai");
    augment->add_option("--mock-script", augment_flags.mock_script,
                        "scripted responses");
    augment->add_option("--model", augment_flags.model, "generator model");
    augment->add_option("--temperature", augment_flags.temperature,
                        "generator temperature");
    augment->add_option("--templates-dir", augment_flags.templates_dir,
                        "prompt template override directory");

    GenRolesFlags roles_flags;
    CLI::App* gen_roles =
        app.add_subcommand("gen-roles", "generate a persona role-set file");
    gen_roles->set_config("--config");
    gen_roles->add_option("--n", roles_flags.n, "number of personas");
    gen_roles->add_option("--out", roles_flags.out_path, "output role file");
    gen_roles->add_option("--backend", roles_flags.backend, "mock | openai");
    gen_roles->add_option("--mock-script", roles_flags.mock_script,
                          "scripted responses");
    gen_roles->add_option("--model", roles_flags.model, "generator model");
    gen_roles->add_option("--temperature", roles_flags.temperature,
                          "generator temperature");
    gen_roles->add_option("--max-parse-retries", roles_flags.max_parse_retries,
                          "formatting attempts before giving up");
    gen_roles->add_option("--templates-dir", roles_flags.templates_dir,
                          "prompt template override directory");

    // CLI11 reads config files only during the root parse, so a
    // per-subcommand --config would be accepted and then silently ignored.
    // Splice file values in as command-line tokens instead, skipping any
    // option given explicitly so flags keep precedence over the file.
    std::vector<std::string> argv = args;
    try {
        CLI::App* sub = argv.empty() ? nullptr
                                     : app.get_subcommand_no_throw(argv[0]);
        std::string config_path;
        for (size_t i = 1; i < argv.size(); ++i) {
            if (argv[i] == "--config" && i + 1 < argv.size())
                config_path = argv[i + 1];
            else if (argv[i].rfind("--config=", 0) == 0)
                config_path = argv[i].substr(9);
        }
        if (sub != nullptr && !config_path.empty()) {
            auto given = [&](const std::string& name) {
                std::string flag = "--" + name;
                for (size_t i = 1; i < argv.size(); ++i)
                    if (argv[i] == flag || argv[i].rfind(flag + "=", 0) == 0)
                        return true;
                return false;
            };
            std::vector<std::string> spliced;
            for (const CLI::ConfigItem& item :
                 CLI::ConfigTOML().from_file(config_path)) {
                if (item.name == "config") continue;
                if (!item.parents.empty() &&
                    item.parents != std::vector<std::string>{sub->get_name()})
                    throw ConfigError("config file section [" +
                                      item.fullname() + "] does not apply to " +
                                      sub->get_name());
                if (given(item.name)) continue;
                if (item.inputs.empty()) spliced.push_back("--" + item.name);
                for (const std::string& input : item.inputs)
                    spliced.push_back("--" + item.name + "=" + input);
            }
            argv.insert(argv.begin() + 1, spliced.begin(), spliced.end());
        }
        std::vector<std::string> reversed(argv.rbegin(), argv.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream sink;
        int code = app.exit(e, io.out, sink);
        if (!sink.str().empty()) io.err << sink.str();
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        io.err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(run_flags, io);
        if (sweep->parsed()) return cmd_sweep(sweep_flags, io);
        if (evaluate->parsed()) return cmd_evaluate(eval_flags, io);
        if (report->parsed()) return cmd_report(report_flags, io);
        if (stats->parsed()) return cmd_stats(stats_flags, io);
        if (augment->parsed()) return cmd_augment_tasks(augment_flags, io);
        if (gen_roles->parsed()) return cmd_gen_roles(roles_flags, io);
        io.err << "no subcommand given\n";
        return 2;
    } catch (const ConfigError& e) {
        io.err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        io.err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        io.err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace llmdisc::cli
