#include "chccomp/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <istream>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

#include <dirent.h>
#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/prctl.h>
#include <sys/resource.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

namespace chccomp {

namespace fs = std::filesystem;

namespace {

std::size_t count_placeholders(const std::string& s) {
  std::size_t n = 0;
  for (auto pos = s.find(kBenchmarkPlaceholder); pos != std::string::npos;
       pos = s.find(kBenchmarkPlaceholder, pos + 1)) {
    ++n;
  }
  return n;
}

}  // namespace

void SolverConfig::validate() const {
  if (solver.empty()) throw ConfigError("solver name is empty");
  if (command.empty()) throw ConfigError("solver '" + solver + "' has an empty command");
  std::size_t n = 0;
  for (const auto& arg : command) n += count_placeholders(arg);
  if (n != 1) {
    throw ConfigError("command of solver '" + solver + "' must contain " +
                      kBenchmarkPlaceholder + " exactly once");
  }
}

void ResourceLimits::validate() const {
  if (!(cpu_seconds > 0) || !(wall_seconds > 0) || memory_bytes == 0) {
    throw ConfigError("resource limits must be positive");
  }
}

bool memory_limit_enforceable() {
  static const bool ok = access("/proc/self/stat", R_OK) == 0;
  return ok;
}

Result parse_verdict(const std::string& output) {
  std::size_t pos = 0;
  while (pos <= output.size()) {
    std::size_t end = output.find('\n', pos);
    if (end == std::string::npos) end = output.size();
    std::string line = output.substr(pos, end - pos);
    auto first = line.find_first_not_of(" \t\r\f\v");
    if (first != std::string::npos) {
      auto last = line.find_last_not_of(" \t\r\f\v");
      line = line.substr(first, last - first + 1);
      if (line == "sat") return Result::Sat;
      if (line == "unsat") return Result::Unsat;
      return Result::Unknown;
    }
    pos = end + 1;
  }
  return Result::Unknown;
}

namespace {

struct GroupUsage {
  double cpu = 0;             // seconds, live and zombie members
  std::uint64_t rss = 0;      // bytes, live members
  bool any = false;
};

// Sums /proc/<pid>/stat over every process whose pgrp is `pgid`.
GroupUsage group_usage(pid_t pgid) {
  static const long ticks = sysconf(_SC_CLK_TCK);
  static const long page = sysconf(_SC_PAGESIZE);
  GroupUsage u;
  DIR* dir = opendir("/proc");
  if (!dir) return u;
  while (dirent* e = readdir(dir)) {
    if (e->d_name[0] < '0' || e->d_name[0] > '9') continue;
    char path[300];
    std::snprintf(path, sizeof path, "/proc/%s/stat", e->d_name);
    int fd = open(path, O_RDONLY | O_CLOEXEC);
    if (fd < 0) continue;
    char buf[1024];
    ssize_t n = read(fd, buf, sizeof buf - 1);
    close(fd);
    if (n <= 0) continue;
    buf[n] = '\0';
    char* p = std::strrchr(buf, ')');
    if (!p) continue;
    // Fields after comm, starting at field 3 (state).
    char state = 0;
    long pgrp = 0;
    unsigned long long ut = 0, st = 0;
    long long cut = 0, cst = 0, rss = 0;
    int got = std::sscanf(p + 2,
                          "%c %*d %ld %*d %*d %*d %*u %*u %*u %*u %*u %llu %llu %lld %lld "
                          "%*d %*d %*d %*d %*u %*u %lld",
                          &state, &pgrp, &ut, &st, &cut, &cst, &rss);
    if (got != 7 || pgrp != pgid) continue;
    u.any = true;
    u.cpu += static_cast<double>(ut + st + cut + cst) / ticks;
    if (state != 'Z') u.rss += static_cast<std::uint64_t>(rss) * page;
  }
  closedir(dir);
  return u;
}

std::string resolve_executable(const std::string& name) {
  if (name.find('/') != std::string::npos) {
    if (access(name.c_str(), X_OK) != 0) throw LaunchError("cannot execute '" + name + "'");
    return name;
  }
  const char* path = std::getenv("PATH");
  std::string dirs = path ? path : "/usr/bin:/bin";
  std::size_t pos = 0;
  while (pos <= dirs.size()) {
    std::size_t end = dirs.find(':', pos);
    if (end == std::string::npos) end = dirs.size();
    std::string dir = dirs.substr(pos, end - pos);
    std::string candidate = (dir.empty() ? "." : dir) + "/" + name;
    struct stat sb;
    if (stat(candidate.c_str(), &sb) == 0 && S_ISREG(sb.st_mode) &&
        access(candidate.c_str(), X_OK) == 0) {
      return candidate;
    }
    pos = end + 1;
  }
  throw LaunchError("executable '" + name + "' not found on PATH");
}

// Orphaned grandchildren get reparented to us, so the cleanup below can
// reap them instead of leaving zombies behind.
void become_subreaper() {
  static std::once_flag once;
  std::call_once(once, [] { prctl(PR_SET_CHILD_SUBREAPER, 1); });
}

// Kills every member of the group and reaps those that are our children.
void cleanup_group(pid_t pgid) {
  kill(-pgid, SIGKILL);
  auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(5);
  for (;;) {
    while (waitpid(-pgid, nullptr, WNOHANG) > 0) {
    }
    if (!group_usage(pgid).any) return;
    if (std::chrono::steady_clock::now() > deadline) return;
    kill(-pgid, SIGKILL);
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
}

constexpr std::size_t kOutputKeep = 1 << 16;

}  // namespace

JobRecord run_job(const SolverConfig& config, const std::string& benchmark_path,
                  const ResourceLimits& limits) {
  config.validate();
  limits.validate();
  if (access(benchmark_path.c_str(), R_OK) != 0) {
    throw LaunchError("benchmark '" + benchmark_path + "' is not readable");
  }
  become_subreaper();

  // Everything the child needs is prepared before fork.
  std::vector<std::string> args = config.command;
  for (auto& a : args) {
    auto pos = a.find(kBenchmarkPlaceholder);
    if (pos != std::string::npos) {
      a.replace(pos, std::strlen(kBenchmarkPlaceholder), benchmark_path);
    }
  }
  std::string exe = resolve_executable(args[0]);
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  int out_pipe[2], err_pipe[2];
  if (pipe2(out_pipe, O_CLOEXEC) != 0) throw LaunchError("pipe: " + std::string(strerror(errno)));
  if (pipe2(err_pipe, O_CLOEXEC) != 0) {
    close(out_pipe[0]);
    close(out_pipe[1]);
    throw LaunchError("pipe: " + std::string(strerror(errno)));
  }
  int devnull = open("/dev/null", O_RDWR | O_CLOEXEC);

  rlim_t cpu_backstop = static_cast<rlim_t>(std::ceil(limits.cpu_seconds)) + 1;
  auto start = std::chrono::steady_clock::now();
  pid_t pid = fork();
  if (pid < 0) {
    close(out_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[0]);
    close(err_pipe[1]);
    if (devnull >= 0) close(devnull);
    throw LaunchError("fork: " + std::string(strerror(errno)));
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(out_pipe[1], STDOUT_FILENO);
    if (devnull >= 0) {
      dup2(devnull, STDIN_FILENO);
      dup2(devnull, STDERR_FILENO);
    }
    rlimit rl{cpu_backstop, cpu_backstop + 1};
    setrlimit(RLIMIT_CPU, &rl);
    execv(exe.c_str(), argv.data());
    int err = errno;
    ssize_t ignored = write(err_pipe[1], &err, sizeof err);
    (void)ignored;
    _exit(127);
  }
  setpgid(pid, pid);  // also done by the child; whichever runs first wins
  close(out_pipe[1]);
  close(err_pipe[1]);
  if (devnull >= 0) close(devnull);

  int exec_errno = 0;
  ssize_t got = read(err_pipe[0], &exec_errno, sizeof exec_errno);
  close(err_pipe[0]);
  if (got == sizeof exec_errno) {
    close(out_pipe[0]);
    waitpid(pid, nullptr, 0);
    cleanup_group(pid);
    throw LaunchError("cannot execute '" + exe + "': " + strerror(exec_errno));
  }

  fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
  std::string output;
  bool out_open = true;
  int wstatus = 0;
  bool exited = false;
  Status killed_for = Status::Complete;
  double cpu_seen = 0;
  rusage ru{};

  auto drain = [&] {
    char buf[4096];
    for (;;) {
      ssize_t n = read(out_pipe[0], buf, sizeof buf);
      if (n > 0) {
        if (output.size() < kOutputKeep) output.append(buf, static_cast<std::size_t>(n));
        continue;
      }
      if (n == 0) out_open = false;
      return;
    }
  };

  while (!exited) {
    if (out_open) {
      pollfd pfd{out_pipe[0], POLLIN, 0};
      poll(&pfd, 1, 20);
      drain();
    } else {
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    pid_t w = wait4(pid, &wstatus, WNOHANG, &ru);
    if (w == pid) {
      exited = true;
      break;
    }
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    GroupUsage u = group_usage(pid);
    cpu_seen = std::max(cpu_seen, u.cpu);
    if (wall >= limits.wall_seconds || cpu_seen >= limits.cpu_seconds) {
      killed_for = Status::Timeout;
    } else if (memory_limit_enforceable() && u.rss > limits.memory_bytes) {
      killed_for = Status::MemOut;
    }
    if (killed_for != Status::Complete) {
      kill(-pid, SIGKILL);
      wait4(pid, &wstatus, 0, &ru);
      exited = true;
    }
  }
  auto wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  // Descendants still running after the leader exits are part of the job.
  GroupUsage tail = group_usage(pid);
  cleanup_group(pid);
  drain();
  close(out_pipe[0]);

  double cpu_tree = static_cast<double>(ru.ru_utime.tv_sec) + ru.ru_utime.tv_usec / 1e6 +
                    static_cast<double>(ru.ru_stime.tv_sec) + ru.ru_stime.tv_usec / 1e6;
  double cpu = std::max({cpu_seen, cpu_tree + tail.cpu});

  JobRecord rec;
  rec.benchmark = benchmark_path;
  rec.solver = config.solver;
  rec.configuration = config.configuration;
  rec.result = Result::Unknown;
  if (killed_for != Status::Complete) {
    rec.status = killed_for;
  } else if (WIFSIGNALED(wstatus) && WTERMSIG(wstatus) == SIGXCPU) {
    rec.status = Status::Timeout;
  } else if (WIFEXITED(wstatus) && WEXITSTATUS(wstatus) == 0) {
    rec.status = Status::Complete;
    rec.result = parse_verdict(output);
  } else {
    rec.status = Status::Crash;
  }
  if (rec.status == Status::Timeout) {
    // Keep "timeout implies a limit was reached" true after rounding.
    if (cpu < limits.cpu_seconds && wall < limits.wall_seconds) cpu = limits.cpu_seconds;
  }
  rec.cpu_time = round_centis(cpu);
  rec.wall_time = round_centis(wall);
  return rec;
}

CampaignResult run_campaign(const std::vector<SolverConfig>& configs,
                            const std::vector<std::string>& benchmarks,
                            const ResourceLimits& limits, int parallelism) {
  if (parallelism < 1) throw ConfigError("parallelism must be at least 1");
  limits.validate();
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& c : configs) {
    c.validate();
    if (!seen.insert({c.solver, c.configuration}).second) {
      throw ConfigError("duplicate solver configuration " + c.solver + "/" + c.configuration);
    }
  }

  struct Job {
    const std::string* benchmark;
    const SolverConfig* config;
  };
  std::vector<Job> jobs;
  for (const auto& b : benchmarks) {
    for (const auto& c : configs) jobs.push_back({&b, &c});
  }
  std::sort(jobs.begin(), jobs.end(), [](const Job& x, const Job& y) {
    return std::tie(*x.benchmark, x.config->solver, x.config->configuration) <
           std::tie(*y.benchmark, y.config->solver, y.config->configuration);
  });

  CampaignResult out;
  out.records.resize(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& j = jobs[i];
      try {
        out.records[i] = run_job(*j.config, *j.benchmark, limits);
      } catch (const std::exception& e) {
        JobRecord r;
        r.benchmark = *j.benchmark;
        r.solver = j.config->solver;
        r.configuration = j.config->configuration;
        r.result = Result::Unknown;
        r.status = Status::Crash;
        out.records[i] = r;
        errors[i] = r.solver + "/" + r.configuration + " on " + r.benchmark + ": " + e.what();
      }
    }
  };
  std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(parallelism),
                                        std::max<std::size_t>(jobs.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < n; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (!e.empty()) out.errors.push_back(std::move(e));
  }
  return out;
}

std::vector<SolverConfig> read_solver_registry(std::istream& in, const std::string& base_dir) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("solver registry: ") + e.what());
  }
  if (j.is_object() && j.contains("solvers")) j = j["solvers"];
  if (!j.is_array()) throw ConfigError("solver registry must be a JSON array");
  std::vector<SolverConfig> out;
  for (const auto& e : j) {
    if (!e.is_object()) throw ConfigError("solver registry entries must be objects");
    for (const auto& [key, value] : e.items()) {
      if (key != "solver" && key != "configuration" && key != "command" && key != "hors_concours") {
        throw ConfigError("solver registry entry: unknown key '" + key + "'");
      }
    }
    try {
      SolverConfig c;
      c.solver = e.at("solver").get<std::string>();
      c.configuration = e.value("configuration", std::string("default"));
      c.command = e.at("command").get<std::vector<std::string>>();
      c.hors_concours = e.value("hors_concours", false);
      if (!c.command.empty() && !base_dir.empty() &&
          c.command[0].find('/') != std::string::npos && fs::path(c.command[0]).is_relative()) {
        c.command[0] = (fs::path(base_dir) / c.command[0]).string();
      }
      c.validate();
      out.push_back(std::move(c));
    } catch (const nlohmann::json::exception& ex) {
      throw ConfigError(std::string("solver registry entry: ") + ex.what());
    }
  }
  return out;
}

}  // namespace chccomp
