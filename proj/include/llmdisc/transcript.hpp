#pragma once

#include <mutex>
#include <string>

#include "llmdisc/types.hpp"

namespace llmdisc {

// One JSON object per line: a header line followed by one line per
// (round, agent) entry in round order, agents ascending within a round.
// A run aborted by a backend failure ends with a failure line instead of
// completing its rounds.
std::string serialize_transcript(const Transcript& t);
Transcript deserialize_transcript(const std::string& jsonl);

Transcript read_transcript_file(const std::string& path);

// Append-as-you-go writer used while a run is in flight, so a crash still
// leaves a parseable prefix. All writes flush and are mutex-serialized.
class TranscriptWriter {
public:
    TranscriptWriter(std::string path, const Transcript& header);

    void append_round(const RoundRecord& round);
    void mark_failure(const std::string& error);

private:
    void append_line(const std::string& line);

    std::string path_;
    std::mutex mutex_;
};

}  // namespace llmdisc
