#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chccomp/job.hpp"

namespace chccomp {

struct SolverScore {
  std::string solver;
  int score = 0;  // sat + unsat
  int sat = 0;
  int unsat = 0;
  double cpu_time = 0.0;
  double wall_time = 0.0;
  int unique = 0;
  bool hors_concours = false;

  friend bool operator==(const SolverScore&, const SolverScore&) = default;
};

/// A benchmark on which at least one solver said sat and another unsat.
struct Inconsistency {
  std::string benchmark;
  std::vector<std::string> sat_solvers;
  std::vector<std::string> unsat_solvers;

  friend bool operator==(const Inconsistency&, const Inconsistency&) = default;
};

class DuplicateRecordError : public Error {
 public:
  using Error::Error;
};

/// Per-solver totals, sorted by solver name. CPU and wall totals include
/// every record, whatever its result. `unique` is filled from count_unique.
/// Throws DuplicateRecordError on two records for one (solver, benchmark).
std::vector<SolverScore> score(const std::vector<JobRecord>& records,
                               const std::set<std::string>& hors_concours = {});

/// Benchmarks a solver decided while every other solver said unknown.
std::map<std::string, int> count_unique(const std::vector<JobRecord>& records);

std::vector<Inconsistency> find_inconsistencies(const std::vector<JobRecord>& records);

struct RankedEntry {
  SolverScore score;
  std::optional<int> place;  // empty for hors-concours solvers
};

/// Descending score, then ascending CPU time, then solver name. Places are
/// handed out only to solvers competing normally.
std::vector<RankedEntry> rank(std::vector<SolverScore> scores);

/// Organizer decisions applied before scoring.
struct OrganizerActions {
  std::set<std::string> disqualified_solvers;
  std::set<std::string> dropped_benchmarks;
};

std::vector<JobRecord> apply_actions(const std::vector<JobRecord>& records,
                                     const OrganizerActions& actions);

// Report renderers.
std::string ranking_table(const std::vector<RankedEntry>& ranking);
std::string ranking_csv(const std::vector<RankedEntry>& ranking);
std::string inconsistencies_jsonl(const std::vector<Inconsistency>& found);

}  // namespace chccomp
