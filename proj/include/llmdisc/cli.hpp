#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "llmdisc/backend.hpp"
#include "llmdisc/types.hpp"

namespace llmdisc::cli {

// Injection points for tests: swap in counting/recording backends and
// capture output. Fields left null fall back to the real implementations.
struct Deps {
    std::function<std::shared_ptr<ChatBackend>(
        BackendKind kind, const std::string& mock_script_path, int max_inflight)>
        make_backend;
    std::ostream* out = nullptr;
    std::ostream* err = nullptr;
};

// argv without the program name. Returns the process exit code:
// 0 success, 1 runtime failure, 2 usage/config error.
int run_cli(const std::vector<std::string>& args, const Deps* deps = nullptr);

// Tasks file: {"benchmark": "...", "tasks": ["...", ...]}.
struct TaskFile {
    Benchmark benchmark = Benchmark::aut;
    std::vector<BenchmarkTask> tasks;
};

TaskFile load_tasks_file(const std::string& path);

// Compiled-in data directory, overridable via the LLMDISC_DATA_DIR
// environment variable.
std::string data_dir();

}  // namespace llmdisc::cli
