// Command-line front end. `run` is the whole program minus main(), so tests
// can drive it with captured streams.

#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace diqss::cli {

enum ExitCode : int { ok = 0, usage = 2, infeasible = 3, io = 4 };

// Relative --out paths are resolved against this directory when set.
inline constexpr const char* kOutputDirEnv = "DIQSS_OUTPUT_DIR";

std::string version();

// Relative `path` joined onto $DIQSS_OUTPUT_DIR when the variable is set.
std::filesystem::path resolve_output(const std::string& path);

// 9 significant digits, shortest of fixed/scientific.
std::string format_number(double v);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace diqss::cli
