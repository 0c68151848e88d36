#pragma once

#include <stdexcept>
#include <string>

namespace llmdisc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem failures: unreadable/unwritable paths.
class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& what)
        : Error(path + ": " + what), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// Malformed input: bad JSON, missing fields, unparseable model output.
class ParseError : public Error {
public:
    using Error::Error;
};

// Invalid or contradictory configuration before any backend call.
class ConfigError : public Error {
public:
    using Error::Error;
};

// A single backend request failed. status==0 means transport-level
// (connect/timeout); retryable follows the HTTP classification.
class BackendError : public Error {
public:
    BackendError(const std::string& what, int status, bool retryable)
        : Error(what), status_(status), retryable_(retryable) {}
    int status() const { return status_; }
    bool retryable() const { return retryable_; }

private:
    int status_ = 0;
    bool retryable_ = false;
};

// All retry attempts for one request were consumed.
class RetryExhaustedError : public Error {
public:
    RetryExhaustedError(int attempts, const std::string& last_error)
        : Error("retries exhausted after " + std::to_string(attempts) +
                " attempts; last error: " + last_error),
          attempts_(attempts), last_error_(last_error) {}
    int attempts() const { return attempts_; }
    const std::string& last_error() const { return last_error_; }

private:
    int attempts_ = 0;
    std::string last_error_;
};

// Judge text contained no usable score token.
class ExtractionError : public Error {
public:
    using Error::Error;
};

// Scoring could not produce a record (e.g. every sample unparseable).
class EvaluationError : public Error {
public:
    using Error::Error;
};

// Statistic mathematically undefined for the given inputs.
class StatsError : public Error {
public:
    using Error::Error;
};

}  // namespace llmdisc
