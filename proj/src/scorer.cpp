#include "chccomp/scorer.hpp"

#include <algorithm>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace chccomp {

namespace {

// benchmark -> solver -> result; also rejects duplicates.
std::map<std::string, std::map<std::string, Result>> by_benchmark(
    const std::vector<JobRecord>& records) {
  std::map<std::string, std::map<std::string, Result>> out;
  for (const auto& r : records) {
    auto [it, fresh] = out[r.benchmark].emplace(r.solver, r.result);
    if (!fresh) {
      throw DuplicateRecordError("two records for solver '" + r.solver + "' on benchmark '" +
                                 r.benchmark + "'");
    }
  }
  return out;
}

}  // namespace

std::map<std::string, int> count_unique(const std::vector<JobRecord>& records) {
  std::map<std::string, int> unique;
  for (const auto& r : records) unique.emplace(r.solver, 0);
  for (const auto& [bench, results] : by_benchmark(records)) {
    const std::string* solo = nullptr;
    int deciders = 0;
    for (const auto& [solver, result] : results) {
      if (is_definite(result)) {
        ++deciders;
        solo = &solver;
      }
    }
    if (deciders == 1) ++unique[*solo];
  }
  return unique;
}

std::vector<SolverScore> score(const std::vector<JobRecord>& records,
                               const std::set<std::string>& hors_concours) {
  auto unique = count_unique(records);  // also validates duplicates
  std::map<std::string, SolverScore> acc;
  for (const auto& r : records) {
    SolverScore& s = acc[r.solver];
    s.solver = r.solver;
    if (r.result == Result::Sat) ++s.sat;
    if (r.result == Result::Unsat) ++s.unsat;
    s.cpu_time += r.cpu_time;
    s.wall_time += r.wall_time;
  }
  std::vector<SolverScore> out;
  for (auto& [name, s] : acc) {
    s.score = s.sat + s.unsat;
    s.unique = unique[name];
    s.hors_concours = hors_concours.count(name) > 0;
    out.push_back(s);
  }
  return out;
}

std::vector<Inconsistency> find_inconsistencies(const std::vector<JobRecord>& records) {
  std::vector<Inconsistency> out;
  for (const auto& [bench, results] : by_benchmark(records)) {
    Inconsistency inc{bench, {}, {}};
    for (const auto& [solver, result] : results) {
      if (result == Result::Sat) inc.sat_solvers.push_back(solver);
      if (result == Result::Unsat) inc.unsat_solvers.push_back(solver);
    }
    if (!inc.sat_solvers.empty() && !inc.unsat_solvers.empty()) out.push_back(std::move(inc));
  }
  return out;
}

std::vector<RankedEntry> rank(std::vector<SolverScore> scores) {
  std::sort(scores.begin(), scores.end(), [](const SolverScore& a, const SolverScore& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.cpu_time != b.cpu_time) return a.cpu_time < b.cpu_time;
    return a.solver < b.solver;
  });
  std::vector<RankedEntry> out;
  int place = 0;
  for (auto& s : scores) {
    RankedEntry e{s, std::nullopt};
    if (!s.hors_concours) e.place = ++place;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<JobRecord> apply_actions(const std::vector<JobRecord>& records,
                                     const OrganizerActions& actions) {
  std::vector<JobRecord> out;
  for (const auto& r : records) {
    if (actions.disqualified_solvers.count(r.solver)) continue;
    if (actions.dropped_benchmarks.count(r.benchmark)) continue;
    out.push_back(r);
  }
  return out;
}

namespace {
std::string fmt_time(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}
}  // namespace

std::string ranking_table(const std::vector<RankedEntry>& ranking) {
  std::vector<std::vector<std::string>> rows = {
      {"Rank", "Solver", "Score", "#sat", "#unsat", "CPU time/s", "Wall-clock/s", "#unique"}};
  for (const auto& e : ranking) {
    const auto& s = e.score;
    rows.push_back({e.place ? std::to_string(*e.place) : "hc", s.solver, std::to_string(s.score),
                    std::to_string(s.sat), std::to_string(s.unsat), fmt_time(s.cpu_time),
                    fmt_time(s.wall_time), std::to_string(s.unique)});
  }
  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::string out;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) line += "  ";
      std::string pad(width[i] - r[i].size(), ' ');
      line += i == 1 ? r[i] + pad : pad + r[i];  // solver column left-aligned
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

std::string ranking_csv(const std::vector<RankedEntry>& ranking) {
  std::string out = "rank,solver,score,sat,unsat,cpu_time,wallclock_time,unique,hors_concours\n";
  for (const auto& e : ranking) {
    const auto& s = e.score;
    out += (e.place ? std::to_string(*e.place) : std::string()) + "," + csv_field(s.solver) + "," +
           std::to_string(s.score) + "," + std::to_string(s.sat) + "," + std::to_string(s.unsat) +
           "," + fmt_time(s.cpu_time) + "," + fmt_time(s.wall_time) + "," +
           std::to_string(s.unique) + "," + (s.hors_concours ? "true" : "false") + "\n";
  }
  return out;
}

std::string inconsistencies_jsonl(const std::vector<Inconsistency>& found) {
  std::string out;
  for (const auto& inc : found) {
    nlohmann::json j = {{"benchmark", inc.benchmark},
                        {"sat", inc.sat_solvers},
                        {"unsat", inc.unsat_solvers}};
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace chccomp
