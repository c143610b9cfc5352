#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chccomp/job.hpp"

namespace chccomp {

inline constexpr const char* kBenchmarkPlaceholder = "{benchmark}";

struct SolverConfig {
  std::string solver;
  std::string configuration = "default";
  /// argv; kBenchmarkPlaceholder occurs exactly once across all elements.
  std::vector<std::string> command;
  bool hors_concours = false;

  void validate() const;  // throws ConfigError
};

struct ResourceLimits {
  double cpu_seconds = 600;
  double wall_seconds = 600;
  std::uint64_t memory_bytes = 64ull << 30;

  static ResourceLimits test() { return {600, 600, 64ull << 30}; }
  static ResourceLimits competition() { return {1800, 1800, 64ull << 30}; }

  void validate() const;  // throws ConfigError
  friend bool operator==(const ResourceLimits&, const ResourceLimits&) = default;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The solver executable could not be started. A solver that starts and then
/// dies is a Crash record instead.
class LaunchError : public Error {
 public:
  using Error::Error;
};

/// True when the memory limit can be enforced on this platform (per-process
/// RSS readable from /proc). Otherwise only CPU and wall limits apply.
bool memory_limit_enforceable();

/// Runs one job in its own process group and kills the whole group when it
/// ends or exceeds a limit. CPU time covers the entire process tree.
JobRecord run_job(const SolverConfig& config, const std::string& benchmark_path,
                  const ResourceLimits& limits);

struct CampaignResult {
  std::vector<JobRecord> records;  // sorted by benchmark, solver, configuration
  std::vector<std::string> errors; // launch failures, one line each
};

/// Runs configs x benchmarks on `parallelism` workers. A job that fails to
/// launch still gets a record (unknown, crash) and an entry in `errors`.
CampaignResult run_campaign(const std::vector<SolverConfig>& configs,
                            const std::vector<std::string>& benchmarks,
                            const ResourceLimits& limits, int parallelism);

/// Solver registry: JSON array of
///   {"solver": ..., "configuration": ..., "command": [...], "hors_concours": bool}
/// Relative executable paths resolve against `base_dir`.
std::vector<SolverConfig> read_solver_registry(std::istream& in, const std::string& base_dir = "");

/// Parses the verdict from solver output: first non-empty trimmed line.
Result parse_verdict(const std::string& output);

}  // namespace chccomp
