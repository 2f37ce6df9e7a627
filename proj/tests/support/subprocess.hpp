#pragma once

#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>

#include <sys/wait.h>

namespace testsupport {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += "'";
  return out;
}

// Runs `exe args` through /bin/sh with optional environment overrides,
// capturing combined output and the exit code.
inline RunResult run_command(const std::string& exe, const std::string& args,
                             const std::map<std::string, std::string>& env = {}) {
  std::string cmd;
  for (const auto& [key, value] : env) {
    cmd += key + "=" + shell_quote(value) + " ";
  }
  cmd += shell_quote(exe) + " " + args + " 2>&1";

  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed for: " + cmd);

  RunResult result;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = std::fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
    result.output.append(buffer, n);
  }
  const int status = ::pclose(pipe);
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else {
    result.exit_code = -1;
  }
  return result;
}

}  // namespace testsupport
