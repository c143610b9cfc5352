#include "chccomp/selector.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace chccomp {

const char* to_string(Rating r) {
  switch (r) {
    case Rating::A: return "A";
    case Rating::Bw: return "Bw";
    case Rating::Br: return "Br";
    case Rating::C: return "C";
    case Rating::SolvedB: return "B";
    case Rating::UnsolvedC: return "C";
    case Rating::Unrated: return "-";
  }
  return "?";
}

std::optional<Rating> parse_rating(const std::string& s, bool single) {
  if (s == "-") return Rating::Unrated;
  if (single) {
    if (s == "B") return Rating::SolvedB;
    if (s == "C") return Rating::UnsolvedC;
    return std::nullopt;
  }
  if (s == "A") return Rating::A;
  if (s == "Bw") return Rating::Bw;
  if (s == "Br") return Rating::Br;
  if (s == "C") return Rating::C;
  return std::nullopt;
}

Rating rate_benchmark(const JobRecord& winner, const JobRecord& runner_up) {
  if (winner.benchmark != runner_up.benchmark) {
    throw MismatchedBenchmarkError("rating records for different benchmarks: '" +
                                   winner.benchmark + "' vs '" + runner_up.benchmark + "'");
  }
  bool w = is_definite(winner.result);
  bool r = is_definite(runner_up.result);
  if (w && r) return Rating::A;
  if (w) return Rating::Bw;
  if (r) return Rating::Br;
  return Rating::C;
}

Rating rate_single(const JobRecord& reference) {
  return is_definite(reference.result) ? Rating::SolvedB : Rating::UnsolvedC;
}

namespace {

JobRecord within(JobRecord r, double timeout) {
  if (r.cpu_time > timeout) r.result = Result::Unknown;
  return r;
}

std::string repository_of(const std::string& benchmark) {
  auto end = benchmark.find_last_of('/');
  if (end == std::string::npos) return ".";
  auto begin = benchmark.find_last_of('/', end == 0 ? 0 : end - 1);
  begin = begin == std::string::npos || begin >= end ? 0 : begin + 1;
  std::string repo = benchmark.substr(begin, end - begin);
  return repo.empty() ? "." : repo;
}

}  // namespace

std::vector<RepoPool> rate_campaign(const std::vector<JobRecord>& records,
                                    const std::string& track, const std::string& winner,
                                    const std::optional<std::string>& runner_up,
                                    double timeout) {
  std::map<std::string, std::map<std::string, const JobRecord*>> by_bench;
  for (const auto& r : records) {
    if (r.solver == winner || (runner_up && r.solver == *runner_up)) {
      by_bench[r.benchmark][r.solver] = &r;
    }
  }
  std::map<std::string, RepoPool> pools;
  for (const auto& [bench, solvers] : by_bench) {
    auto w = solvers.find(winner);
    if (w == solvers.end()) {
      throw MismatchedBenchmarkError("no record of '" + winner + "' for '" + bench + "'");
    }
    Rating rating;
    if (runner_up) {
      auto r = solvers.find(*runner_up);
      if (r == solvers.end()) {
        throw MismatchedBenchmarkError("no record of '" + *runner_up + "' for '" + bench + "'");
      }
      rating = rate_benchmark(within(*w->second, timeout), within(*r->second, timeout));
    } else {
      rating = rate_single(within(*w->second, timeout));
    }
    std::string repo = repository_of(bench);
    RepoPool& p = pools[repo];
    p.track = track;
    p.repository = repo;
    p.buckets[rating].push_back(bench);
  }
  std::vector<RepoPool> out;
  for (auto& [repo, p] : pools) out.push_back(std::move(p));
  return out;
}

std::string bucket_manifest(const std::vector<RepoPool>& pools) {
  std::string out;
  for (const auto& p : pools) {
    for (const auto& [rating, members] : p.buckets) {
      for (const auto& m : members) {
        out += p.track + "\t" + p.repository + "\t" + to_string(rating) + "\t" + m + "\n";
      }
    }
  }
  return out;
}

namespace {

// Guards against 0.2 * 45 landing a hair under 9 in binary floating point.
int quota(double fraction, int cap) {
  return static_cast<int>(std::floor(fraction * static_cast<double>(cap) + 1e-9));
}

bool fraction_ok(double f) { return f >= 0.0 && f <= 1.0; }

}  // namespace

void SelectionPolicy::validate() const {
  const auto& f = fractions;
  for (double x : {f.a, f.bw, f.br, f.c, f.solved, f.unsolved}) {
    if (!fraction_ok(x)) throw SelectionError("selection fractions must lie in [0, 1]");
  }
  if (f.a + f.bw + f.br + f.c > 1.0 + 1e-9) {
    throw SelectionError("two-solver fractions sum to more than 1");
  }
  if (f.solved + f.unsolved > 1.0 + 1e-9) {
    throw SelectionError("single-solver fractions sum to more than 1");
  }
  if (rating_timeout <= 0) throw SelectionError("rating timeout must be positive");
  for (const auto& [track, repos] : caps) {
    for (const auto& [repo, n] : repos) {
      if (n <= 0) throw SelectionError("cap for " + track + "/" + repo + " must be positive");
    }
  }
}

int SelectionPolicy::cap(const std::string& track, const std::string& repository) const {
  auto t = caps.find(track);
  if (t != caps.end()) {
    auto r = t->second.find(repository);
    if (r != t->second.end()) return r->second;
  }
  throw SelectionError("no benchmark cap configured for " + track + "/" + repository);
}

std::size_t RepoPool::bucket_size(Rating r) const {
  auto it = buckets.find(r);
  return it == buckets.end() ? 0 : it->second.size();
}

void RepoPool::validate() const {
  std::set<std::string> seen;
  for (const auto& [rating, members] : buckets) {
    for (const auto& m : members) {
      if (!seen.insert(m).second) {
        throw SelectionError("benchmark '" + m + "' appears twice in pool " + track + "/" +
                             repository);
      }
    }
  }
}

TwoSolverTake two_solver_take(int cap, int n_a, int n_bw, int n_br, int n_c,
                              const SelectionFractions& f) {
  TwoSolverTake t;
  int q_a = quota(f.a, cap);
  t.a = std::min(n_a, q_a);
  int short_a = q_a - t.a;

  int allot_w = quota(f.bw, cap) + (short_a + 1) / 2;
  int allot_r = quota(f.br, cap) + short_a / 2;
  t.bw = std::min(n_bw, allot_w);
  t.br = std::min(n_br, allot_r);
  int short_b = (allot_w - t.bw) + (allot_r - t.br);

  t.c = std::min(n_c, quota(f.c, cap) + short_b);
  return t;
}

SingleSolverTake single_solver_take(int cap, int n_solved, int n_unsolved,
                                    const SelectionFractions& f) {
  SingleSolverTake t;
  int q_solved = quota(f.solved, cap);
  t.solved = std::min(n_solved, q_solved);
  t.unsolved = std::min(n_unsolved, quota(f.unsolved, cap) + (q_solved - t.solved));
  return t;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t bucket_seed(std::uint64_t seed, const RepoPool& pool, Rating r) {
  return seed ^ fnv1a(pool.track + '\t' + pool.repository + '\t' + to_string(r));
}

// Unbiased draw in [0, bound); mt19937_64's output is fixed by the standard,
// unlike the distributions, so this keeps selections portable.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                        std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

void take(const RepoPool& pool, Rating r, int count, std::uint64_t seed, std::vector<Pick>& out) {
  auto it = pool.buckets.find(r);
  if (it == pool.buckets.end() || count <= 0) return;
  for (auto& m : sample(it->second, static_cast<std::size_t>(count), bucket_seed(seed, pool, r))) {
    out.push_back(Pick{std::move(m), r});
  }
}

int size_of(const RepoPool& p, Rating r) { return static_cast<int>(p.bucket_size(r)); }

}  // namespace

std::vector<std::string> sample(std::vector<std::string> members, std::size_t count,
                                std::uint64_t seed) {
  std::sort(members.begin(), members.end());
  count = std::min(count, members.size());
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + static_cast<std::size_t>(draw(rng, members.size() - i));
    std::swap(members[i], members[j]);
  }
  members.resize(count);
  return members;
}

std::vector<Pick> select_two_solver(const RepoPool& pool, const SelectionPolicy& policy) {
  pool.validate();
  int cap = policy.cap(pool.track, pool.repository);
  TwoSolverTake t = two_solver_take(cap, size_of(pool, Rating::A), size_of(pool, Rating::Bw),
                                    size_of(pool, Rating::Br), size_of(pool, Rating::C),
                                    policy.fractions);
  std::vector<Pick> out;
  take(pool, Rating::A, t.a, policy.seed, out);
  take(pool, Rating::Bw, t.bw, policy.seed, out);
  take(pool, Rating::Br, t.br, policy.seed, out);
  take(pool, Rating::C, t.c, policy.seed, out);
  return out;
}

std::vector<Pick> select_single_solver(const RepoPool& pool, const SelectionPolicy& policy) {
  pool.validate();
  int cap = policy.cap(pool.track, pool.repository);
  SingleSolverTake t = single_solver_take(cap, size_of(pool, Rating::SolvedB),
                                          size_of(pool, Rating::UnsolvedC), policy.fractions);
  std::vector<Pick> out;
  take(pool, Rating::SolvedB, t.solved, policy.seed, out);
  take(pool, Rating::UnsolvedC, t.unsolved, policy.seed, out);
  return out;
}

std::vector<Pick> select_take_all(const RepoPool& pool) {
  std::vector<Pick> out;
  std::set<std::string> seen;
  for (const auto& [rating, members] : pool.buckets) {
    for (const auto& m : members) {
      if (seen.insert(m).second) out.push_back(Pick{m, rating});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Pick& a, const Pick& b) { return a.benchmark < b.benchmark; });
  return out;
}

std::vector<RepoPool> read_bucket_manifest(std::istream& in, const SelectionPolicy& policy) {
  std::map<std::pair<std::string, std::string>, RepoPool> pools;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) f.push_back(field);
    if (f.size() != 4) {
      throw SelectionError("manifest line " + std::to_string(line_no) +
                           ": expected 4 tab-separated fields");
    }
    bool single = policy.single_solver_tracks.count(f[0]) > 0;
    auto rating = parse_rating(f[2], single);
    if (!rating) {
      throw SelectionError("manifest line " + std::to_string(line_no) + ": bad rating '" + f[2] +
                           "' for track " + f[0]);
    }
    if (*rating == Rating::Unrated && !policy.take_all_tracks.count(f[0])) {
      throw SelectionError("manifest line " + std::to_string(line_no) +
                           ": unrated benchmark outside a take-all track");
    }
    RepoPool& p = pools[{f[0], f[1]}];
    p.track = f[0];
    p.repository = f[1];
    p.buckets[*rating].push_back(f[3]);
  }
  std::vector<RepoPool> out;
  for (auto& [key, p] : pools) out.push_back(std::move(p));
  return out;
}

SelectionOutcome select_all(const std::vector<RepoPool>& pools, const SelectionPolicy& policy) {
  policy.validate();
  SelectionOutcome outcome;
  for (const auto& pool : pools) {
    std::vector<Pick> picks;
    PoolSummary summary{pool.track, pool.repository, std::nullopt, 0};
    if (policy.take_all_tracks.count(pool.track)) {
      picks = select_take_all(pool);
    } else {
      summary.cap = policy.cap(pool.track, pool.repository);
      picks = policy.single_solver_tracks.count(pool.track) ? select_single_solver(pool, policy)
                                                            : select_two_solver(pool, policy);
    }
    summary.selected = picks.size();
    outcome.summary.push_back(summary);
    for (auto& p : picks) {
      outcome.rows.push_back(SelectionRow{pool.track, pool.repository, p.rating, std::move(p.benchmark)});
    }
  }
  return outcome;
}

std::string selection_manifest(const SelectionOutcome& outcome) {
  std::string out;
  for (const auto& r : outcome.rows) {
    out += r.track + "\t" + r.repository + "\t" + to_string(r.rating) + "\t" + r.benchmark + "\n";
  }
  return out;
}

}  // namespace chccomp
