#pragma once
#include <string>
#include <vector>

namespace kex::cli {

struct RunResult {
    int exit_code = 0;
    std::string output;  // report artifact
    std::string error;   // diagnostics on failure
};

// Exit codes: 0 success, 2 input error, 3 verification failure,
// 4 internal invariant violation.
RunResult run(const std::vector<std::string>& args);

}  // namespace kex::cli
