#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chccomp/job.hpp"

namespace chccomp {

/// Difficulty labels. A/Bw/Br/C come from a winner + runner-up pair,
/// SolvedB/UnsolvedC from a single reference solver. Unrated marks pools of
/// take-all tracks, which are never rated.
enum class Rating { A, Bw, Br, C, SolvedB, UnsolvedC, Unrated };

const char* to_string(Rating r);

/// Manifest spelling: A, Bw, Br, C (two-solver), B, C (single-solver), `-`.
/// `single` picks the meaning of `C`.
std::optional<Rating> parse_rating(const std::string& s, bool single);

class MismatchedBenchmarkError : public Error {
 public:
  using Error::Error;
};

class SelectionError : public Error {
 public:
  using Error::Error;
};

Rating rate_benchmark(const JobRecord& winner, const JobRecord& runner_up);
Rating rate_single(const JobRecord& reference);

struct SelectionFractions {
  double a = 0.2;
  double bw = 0.2;
  double br = 0.2;
  double c = 0.4;
  double solved = 0.2;
  double unsolved = 0.8;
};

struct SelectionPolicy {
  /// N_r per track, per repository.
  std::map<std::string, std::map<std::string, int>> caps;
  double rating_timeout = 30.0;
  SelectionFractions fractions;
  std::uint64_t seed = 0;
  std::set<std::string> take_all_tracks = {"LIA-lin-Arrays"};
  std::set<std::string> single_solver_tracks = {"LIA-nonlin-Arrays-nonrecADT", "ADT-LIA-nonlin"};

  /// Throws SelectionError on out-of-range fractions or non-positive caps.
  void validate() const;
  /// Throws SelectionError if no cap is configured.
  int cap(const std::string& track, const std::string& repository) const;
};

/// Candidates of one repository for one track, split by rating.
struct RepoPool {
  std::string repository;
  std::string track;
  std::map<Rating, std::vector<std::string>> buckets;

  std::size_t bucket_size(Rating r) const;
  /// Throws SelectionError when a benchmark sits in two buckets.
  void validate() const;
};

/// Buckets a rating campaign for one track. A benchmark counts as solved by
/// a reference solver when its result is definite within `timeout` CPU
/// seconds. The repository of a benchmark is the name of its parent
/// directory. Without a runner-up, the single-solver labels are used.
/// Throws MismatchedBenchmarkError if a benchmark lacks a reference record.
std::vector<RepoPool> rate_campaign(const std::vector<JobRecord>& records,
                                    const std::string& track, const std::string& winner,
                                    const std::optional<std::string>& runner_up,
                                    double timeout);

std::string bucket_manifest(const std::vector<RepoPool>& pools);

struct Pick {
  std::string benchmark;
  Rating rating;
  friend bool operator==(const Pick&, const Pick&) = default;
};

/// How many members each stage takes; the arithmetic behind selection.
struct TwoSolverTake {
  int a = 0, bw = 0, br = 0, c = 0;
  int total() const { return a + bw + br + c; }
};
struct SingleSolverTake {
  int solved = 0, unsolved = 0;
  int total() const { return solved + unsolved; }
};

/// Floor quotas with shortfalls cascading strictly downward: A's shortfall
/// is split over the B sides (odd unit to the winner side), and whatever
/// either B side cannot use goes to C. B sides do not backfill each other.
TwoSolverTake two_solver_take(int cap, int n_a, int n_bw, int n_br, int n_c,
                              const SelectionFractions& f);
SingleSolverTake single_solver_take(int cap, int n_solved, int n_unsolved,
                                    const SelectionFractions& f);

std::vector<Pick> select_two_solver(const RepoPool& pool, const SelectionPolicy& policy);
std::vector<Pick> select_single_solver(const RepoPool& pool, const SelectionPolicy& policy);
std::vector<Pick> select_take_all(const RepoPool& pool);

/// Draws `count` members uniformly without replacement. Input order does
/// not matter; the draw depends only on the member set and `seed`.
std::vector<std::string> sample(std::vector<std::string> members, std::size_t count,
                                std::uint64_t seed);

// Manifests: tab-separated `track  repository  rating  benchmark`, one row
// per line; `#` starts a comment line.

/// Groups rows into pools sorted by (track, repository).
std::vector<RepoPool> read_bucket_manifest(std::istream& in, const SelectionPolicy& policy);

struct SelectionRow {
  std::string track;
  std::string repository;
  Rating rating;
  std::string benchmark;
};

struct PoolSummary {
  std::string track;
  std::string repository;
  std::optional<int> cap;  // empty for take-all tracks
  std::size_t selected = 0;
};

struct SelectionOutcome {
  std::vector<SelectionRow> rows;
  std::vector<PoolSummary> summary;
};

/// Runs the right procedure for every pool.
SelectionOutcome select_all(const std::vector<RepoPool>& pools, const SelectionPolicy& policy);

std::string selection_manifest(const SelectionOutcome& outcome);

}  // namespace chccomp
