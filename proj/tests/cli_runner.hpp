#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace cli {

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("qmin_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

inline void spit(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

struct Run {
    int code = -1;
    std::string out;
};

/// Runs the qms binary with `args`, capturing stdout and stderr together.
inline Run qms(const std::string& args) {
    const auto log = scratch("last_run.txt");
    const std::string cmd = std::string("\"") + QMS_CLI_PATH + "\" " + args + " > \"" + log + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(log);
    return r;
}

inline std::string sample(const std::string& name) { return std::string(QMS_SAMPLES_DIR) + "/" + name; }

}  // namespace cli
