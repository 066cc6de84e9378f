#include <cstdio>
#include <string>
#include <vector>

#include "kex/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    kex::cli::RunResult res = kex::cli::run(args);
    if (!res.output.empty()) std::fputs(res.output.c_str(), stdout);
    if (!res.error.empty()) std::fprintf(stderr, "error: %s\n", res.error.c_str());
    return res.exit_code;
}
