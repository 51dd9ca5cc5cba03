#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "support/temp_dir.hpp"

struct CliResult {
    int status = -1;
    std::string out;
    std::string err;
};

inline std::string shell_quote(const std::string &s) {
    std::string q = "'";
    for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return q + "'";
}

// Runs the pulso binary with `args` (already quoted), capturing both streams.
inline CliResult run_cli(const TempDir &scratch, const std::string &args, const std::string &env = "") {
    const auto out = scratch / "stdout.txt";
    const auto err = scratch / "stderr.txt";
    const std::string cmd = env + " " + shell_quote(PULSO_BIN) + " " + args + " >" + shell_quote(out.string()) +
                            " 2>" + shell_quote(err.string());
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}
