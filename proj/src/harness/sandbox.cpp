#include "perturbench/harness/sandbox.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>

#include "perturbench/error.hpp"

extern char** environ;

namespace perturbench {
namespace {

std::string resolve_executable(const std::string& name) {
  if (name.find('/') != std::string::npos) return name;
  const char* path = std::getenv("PATH");
  std::string dirs = path != nullptr ? path : "/usr/local/bin:/usr/bin:/bin";
  std::size_t start = 0;
  for (;;) {
    const auto colon = dirs.find(':', start);
    auto dir = dirs.substr(start, colon - start);
    if (dir.empty()) dir = ".";
    const auto candidate = dir + "/" + name;
    if (::access(candidate.c_str(), X_OK) == 0) return candidate;
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  throw ConfigError("executable \"" + name + "\" not found on PATH");
}

class Pipe {
 public:
  Pipe() {
    if (::pipe2(fds_.data(), O_CLOEXEC) != 0) {
      throw Error(std::string("pipe failed: ") + std::strerror(errno));
    }
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  Pipe(const Pipe&) = delete;
  Pipe& operator=(const Pipe&) = delete;

  [[nodiscard]] int read_end() const { return fds_[0]; }
  [[nodiscard]] int write_end() const { return fds_[1]; }
  void close_read() { close_fd(fds_[0]); }
  void close_write() { close_fd(fds_[1]); }

 private:
  static void close_fd(int& fd) {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
  std::array<int, 2> fds_{-1, -1};
};

}  // namespace

SandboxConfig SandboxConfig::python_default() {
  SandboxConfig config;
  config.languages["python"] = {{"python3", "{file}"}, ".py", "test_check()"};
  config.languages["py"] = config.languages["python"];
  return config;
}

const LanguageCommand& SandboxConfig::command_for(const std::string& language) const {
  const auto it = languages.find(language);
  if (it == languages.end()) {
    throw ConfigError("no sandbox command template for language \"" + language + "\"");
  }
  return it->second;
}

nlohmann::ordered_json sandbox_config_to_json(const SandboxConfig& c) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json langs = nlohmann::ordered_json::object();
  for (const auto& [name, cmd] : c.languages) {
    langs[name] = {{"argv", cmd.argv},
                   {"file_extension", cmd.file_extension},
                   {"entry_invocation", cmd.entry_invocation}};
  }
  j["languages"] = std::move(langs);
  j["timeout_secs"] = c.timeout_secs;
  j["output_limit_bytes"] = c.output_limit_bytes;
  j["env_allowlist"] = c.env_allowlist;
  return j;
}

ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::filesystem::path& workdir,
                          const SandboxConfig& config) {
  if (argv.empty()) throw ConfigError("empty sandbox command");
  if (config.timeout_secs <= 0) throw ConfigError("sandbox timeout must be positive");

  // Everything the child needs is prepared before fork; after fork the
  // child only makes async-signal-safe calls.
  const auto executable = resolve_executable(argv[0]);
  std::vector<char*> child_argv;
  for (const auto& a : argv) child_argv.push_back(const_cast<char*>(a.c_str()));
  child_argv.push_back(nullptr);

  std::vector<std::string> env_storage;
  for (const auto& name : config.env_allowlist) {
    if (const char* value = std::getenv(name.c_str())) {
      env_storage.push_back(name + "=" + value);
    }
  }
  std::vector<char*> child_env;
  for (auto& e : env_storage) child_env.push_back(e.data());
  child_env.push_back(nullptr);
  const std::string dir = workdir.string();

  Pipe out;
  Pipe err;
  const auto started = std::chrono::steady_clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) throw Error(std::string("fork failed: ") + std::strerror(errno));
  if (pid == 0) {
    ::setpgid(0, 0);
    const rlimit no_core{0, 0};
    ::setrlimit(RLIMIT_CORE, &no_core);
    const int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    ::dup2(out.write_end(), STDOUT_FILENO);
    ::dup2(err.write_end(), STDERR_FILENO);
    if (::chdir(dir.c_str()) != 0) ::_exit(126);
    ::execve(executable.c_str(), child_argv.data(), child_env.data());
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  out.close_write();
  err.close_write();

  ProcessResult result;
  const auto deadline =
      started + std::chrono::milliseconds(static_cast<long long>(config.timeout_secs * 1000));
  std::array<pollfd, 2> fds{{{out.read_end(), POLLIN, 0}, {err.read_end(), POLLIN, 0}}};
  std::array<std::string*, 2> sinks{&result.stdout_text, &result.stderr_text};
  std::array<char, 8192> buffer{};
  int open_streams = 2;
  int status = 0;
  bool exited = false;
  for (;;) {
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) {
      result.timed_out = true;
      break;
    }
    // Once the process is gone, drain whatever is already buffered and stop;
    // a grandchild holding the pipes open does not extend the run.
    const int wait_ms = exited ? 0 : static_cast<int>(std::min<long long>(remaining.count(), 20));
    const int ready = ::poll(fds.data(), fds.size(), wait_ms);
    if (ready < 0 && errno != EINTR) break;
    for (std::size_t i = 0; ready > 0 && i < fds.size(); ++i) {
      if (fds[i].fd < 0 || fds[i].revents == 0) continue;
      const auto n = ::read(fds[i].fd, buffer.data(), buffer.size());
      if (n <= 0) {
        fds[i].fd = -1;
        --open_streams;
        continue;
      }
      auto& sink = *sinks[i];
      const auto room = config.output_limit_bytes > sink.size()
                            ? config.output_limit_bytes - sink.size()
                            : 0;
      const auto take = std::min<std::size_t>(room, static_cast<std::size_t>(n));
      sink.append(buffer.data(), take);
      if (take < static_cast<std::size_t>(n)) result.output_truncated = true;
    }
    if (exited && (ready <= 0 || open_streams == 0)) break;
    if (!exited && ::waitpid(pid, &status, WNOHANG) == pid) exited = true;
  }
  // The whole process group goes, including strays left behind by a
  // candidate that exited normally.
  ::kill(-pid, SIGKILL);
  if (!exited) ::waitpid(pid, &status, 0);

  result.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();
  if (!result.timed_out) {
    if (WIFEXITED(status)) {
      result.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
      result.signaled = true;
      result.signal = WTERMSIG(status);
    }
  }
  return result;
}

}  // namespace perturbench
