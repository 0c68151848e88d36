#include "llmdisc/transcript.hpp"

#include <fstream>
#include <sstream>

#include "llmdisc/errors.hpp"

namespace llmdisc {

namespace {

json header_json(const Transcript& t) {
    return json{{"kind", "header"},
                {"run_id", t.run_id},
                {"task_id", t.task_id},
                {"config", t.config}};
}

json entry_json(const RoundRecord& round, const TranscriptEntry& e) {
    return json{{"kind", "entry"},
                {"round", round.round},
                {"phase", to_string(round.phase)},
                {"agent", e.agent_index},
                {"prompt", e.prompt},
                {"response", e.response}};
}

std::string require_string(const json& j, const char* field, int line_no) {
    if (!j.contains(field))
        throw ParseError("line " + std::to_string(line_no) +
                         ": missing field '" + field + "'");
    if (!j.at(field).is_string())
        throw ParseError("line " + std::to_string(line_no) + ": field '" +
                         field + "' must be a string");
    return j.at(field).get<std::string>();
}

int require_int(const json& j, const char* field, int line_no) {
    if (!j.contains(field))
        throw ParseError("line " + std::to_string(line_no) +
                         ": missing field '" + field + "'");
    if (!j.at(field).is_number_integer())
        throw ParseError("line " + std::to_string(line_no) + ": field '" +
                         field + "' must be an integer");
    return j.at(field).get<int>();
}

}  // namespace

std::string serialize_transcript(const Transcript& t) {
    std::ostringstream out;
    out << header_json(t).dump() << '\n';
    for (const RoundRecord& round : t.rounds)
        for (const TranscriptEntry& e : round.entries)
            out << entry_json(round, e).dump() << '\n';
    if (t.failure)
        out << json{{"kind", "failure"}, {"error", *t.failure}}.dump() << '\n';
    return out.str();
}

Transcript deserialize_transcript(const std::string& jsonl) {
    Transcript t;
    std::istringstream in(jsonl);
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": invalid JSON: " + e.what());
        }
        std::string kind = require_string(j, "kind", line_no);
        if (!have_header) {
            if (kind != "header")
                throw ParseError("line 1: expected header record, found '" +
                                 kind + "'");
            t.run_id = require_string(j, "run_id", line_no);
            t.task_id = j.value("task_id", "");
            if (!j.contains("config"))
                throw ParseError("line " + std::to_string(line_no) +
                                 ": missing field 'config'");
            try {
                t.config = j.at("config").get<RunConfig>();
            } catch (const json::exception& e) {
                throw ParseError("line " + std::to_string(line_no) +
                                 ": bad config: " + e.what());
            }
            have_header = true;
            continue;
        }
        if (kind == "header")
            throw ParseError("line " + std::to_string(line_no) +
                             ": duplicate header record");
        if (kind == "failure") {
            t.failure = require_string(j, "error", line_no);
            continue;
        }
        if (kind != "entry")
            throw ParseError("line " + std::to_string(line_no) +
                             ": unknown record kind '" + kind + "'");
        int round_no = require_int(j, "round", line_no);
        Phase phase;
        try {
            phase = phase_from_string(require_string(j, "phase", line_no));
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        TranscriptEntry entry;
        entry.agent_index = require_int(j, "agent", line_no);
        entry.prompt = require_string(j, "prompt", line_no);
        entry.response = require_string(j, "response", line_no);
        if (t.rounds.empty() || t.rounds.back().round != round_no) {
            RoundRecord r;
            r.round = round_no;
            r.phase = phase;
            t.rounds.push_back(std::move(r));
        } else if (t.rounds.back().phase != phase) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": phase differs within round " +
                             std::to_string(round_no));
        }
        t.rounds.back().entries.push_back(std::move(entry));
    }
    if (!have_header)
        throw ParseError("line 1: expected header record, found end of input");
    validate(t);
    return t;
}

Transcript read_transcript_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_transcript(buf.str());
}

TranscriptWriter::TranscriptWriter(std::string path, const Transcript& header)
    : path_(std::move(path)) {
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path_, "cannot open for writing");
    out << header_json(header).dump() << '\n';
    out.flush();
    if (!out) throw IoError(path_, "write failed");
}

void TranscriptWriter::append_line(const std::string& line) {
    std::lock_guard<std::mutex> lock(mutex_);
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw IoError(path_, "cannot open for appending");
    out << line << '\n';
    out.flush();
    if (!out) throw IoError(path_, "write failed");
}

void TranscriptWriter::append_round(const RoundRecord& round) {
    for (const TranscriptEntry& e : round.entries)
        append_line(entry_json(round, e).dump());
}

void TranscriptWriter::mark_failure(const std::string& error) {
    append_line(json{{"kind", "failure"}, {"error", error}}.dump());
}

}  // namespace llmdisc
