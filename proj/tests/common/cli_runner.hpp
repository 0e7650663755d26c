#pragma once

// Runs the phasekit executable in a scratch directory and captures stdout.
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

namespace clitest {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
};

inline fs::path scratch(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("phasekit-" + tag + "-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Result run(const std::string& cli, const std::string& args, const fs::path& cwd) {
  const fs::path out = cwd / "stdout.txt";
  const std::string cmd = "cd '" + cwd.string() + "' && '" + cli + "' " + args + " > '" + out.string() +
                          "' 2> '" + (cwd / "stderr.txt").string() + "'";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  return r;
}

// Every regular file in a against the same name in b, byte for byte.
inline bool same_tree(const fs::path& a, const fs::path& b) {
  if (!fs::is_directory(a) || !fs::is_directory(b)) return false;
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const fs::path other = b / e.path().filename();
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) return false;
    ++n;
  }
  return n > 0;
}

} // namespace clitest
