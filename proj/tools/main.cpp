#include <string>
#include <vector>

#include "llmdisc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return llmdisc::cli::run_cli(args);
}
