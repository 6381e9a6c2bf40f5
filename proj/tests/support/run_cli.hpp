#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace combridge::testing {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Runs `binary args` through the shell, capturing both streams.
inline CliResult run_cli(const std::string& binary, const std::string& args, const std::filesystem::path& scratch,
                         const std::string& env = "") {
  const auto out_path = scratch / "stdout.txt";
  const auto err_path = scratch / "stderr.txt";
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" + binary + "' " + args + " >'" + out_path.string() +
                          "' 2>'" + err_path.string() + "'";
  const int status = std::system(cmd.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  return result;
}

inline std::filesystem::path make_scratch(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("combridge_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace combridge::testing
