// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "adt_graphs.hpp"
#include "chc_gen.hpp"
#include "chccomp/categorizer.hpp"
#include "chccomp/frontend.hpp"
#include "chccomp/normalizer.hpp"
#include "chccomp/scorer.hpp"
#include "chccomp/selector.hpp"
#include "competition_fixture.hpp"
#include "published_results.hpp"
#include "score_fixture.hpp"

using namespace chccomp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail.clear();
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

std::string q(const fs::path& p) { return testing::shell_quote(p.string()); }

testing::CommandResult cli(const std::string& args, const fs::path& stderr_file) {
  return testing::run_command(testing::shell_quote(CHCCOMP_CLI) + " " + args + " 2>" + q(stderr_file));
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

// ---------------------------------------------------------------------------

Outcome selection_counts() {
  Outcome o;
  testing::TempDir dir;
  std::string buckets;
  nlohmann::json caps;
  std::map<std::pair<std::string, std::string>, int> expected;
  auto add = [&](const std::string& track, const std::string& repo, const char* rating, int n) {
    for (int i = 0; i < n; ++i) {
      buckets += track + "\t" + repo + "\t" + rating + "\t" + track + "/" + repo + "/" + rating + "/" +
                 std::to_string(i) + ".smt2\n";
    }
  };
  for (const auto& r : published::two_solver_rows()) {
    add(r.track, r.repository, "A", r.a);
    add(r.track, r.repository, "Bw", r.bw);
    add(r.track, r.repository, "Br", r.br);
    add(r.track, r.repository, "C", r.c);
    caps[r.track][r.repository] = r.cap;
    expected[{r.track, r.repository}] = r.selected;
  }
  for (const auto& r : published::single_solver_rows()) {
    add(r.track, r.repository, "B", r.solved);
    add(r.track, r.repository, "C", r.unsolved);
    caps[r.track][r.repository] = r.cap;
    expected[{r.track, r.repository}] = r.selected;
  }
  testing::write_file(dir.path() / "buckets.tsv", buckets);
  testing::write_file(dir.path() / "cfg.json", nlohmann::json{{"selection", {{"caps", caps}}}}.dump());
  auto res = cli("select --config " + q(dir.path() / "cfg.json") + " --buckets " +
                     q(dir.path() / "buckets.tsv"),
                 dir.path() / "err");
  if (res.status != 0) {
    o.fail("select exited " + std::to_string(res.status) + ": " + testing::read_file(dir.path() / "err"));
    return o;
  }
  std::map<std::pair<std::string, std::string>, int> got;
  for (const auto& line : lines_of(res.out)) {
    std::istringstream f(line);
    std::string track, repo;
    std::getline(f, track, '\t');
    std::getline(f, repo, '\t');
    ++got[{track, repo}];
  }
  int matched = 0;
  for (const auto& [key, n] : expected) {
    if (got[key] == n) ++matched;
    else o.fail(key.first + "/" + key.second + " selected " + std::to_string(got[key]) + ", published " + std::to_string(n));
  }
  if (o.pass) {
    o.detail = std::to_string(matched) + "/" + std::to_string(expected.size()) +
               " published rows reproduced exactly via `chccomp select`";
  }
  return o;
}

Outcome score_arithmetic() {
  Outcome o;
  int rows = 0;
  for (const auto& table : published::track_tables()) {
    std::string track = table.track;
    auto records = parse_job_csv(job_csv(testing::realise_track(table)));
    auto ranking = rank(score(records, {published::kHorsConcours}));
    if (ranking.size() != table.rows.size()) {
      o.fail(track + ": wrong number of solvers");
      continue;
    }
    for (std::size_t i = 0; i < ranking.size(); ++i) {
      const auto& want = table.rows[i];
      const auto& s = ranking[i].score;
      if (s.solver != want.solver) o.fail(track + ": position " + std::to_string(i + 1) + " is " + s.solver + ", published " + want.solver);
      else if (s.score != want.score || s.sat != want.sat || s.unsat != want.unsat) o.fail(track + "/" + s.solver + ": score mismatch");
      else ++rows;
    }
    std::vector<std::string> placed;
    for (const auto& e : ranking) {
      if (e.place && *e.place <= static_cast<int>(table.winners.size())) placed.push_back(e.score.solver);
    }
    if (placed != std::vector<std::string>(table.winners.begin(), table.winners.end())) {
      o.fail(track + ": winners differ from the published results");
    }
  }
  if (o.pass) {
    o.detail = std::to_string(rows) + " solver rows over " + std::to_string(published::track_tables().size()) +
               " tracks: scores, order and winners exact (Golem wins LIA-lin with Spacer hors concours)";
  }
  return o;
}

Outcome categorizer_properties() {
  Outcome o;
  auto files = testing::fixture_files("categorize");
  int corpus_ok = 0;
  for (const auto& f : files) {
    std::string want = testing::expected_label(f);
    TrackAssignment got = categorize_text(testing::read_file(f));
    bool ok = want == "Uncategorized" ? got.track == Track::Uncategorized : got.label() == want;
    if (ok) ++corpus_ok;
    else o.fail(f.filename().string() + " categorized as " + got.label() + ", annotated " + want);
  }
  if (files.size() < 30) o.fail("corpus has only " + std::to_string(files.size()) + " files");

  std::mt19937 rng(2023);
  long exhaustive = 0, sampled = 0, mismatches = 0;
  const int exhaustive_sorts = 4;
  for (int n = 1; n <= exhaustive_sorts; ++n) {
    for (long mask = 0; mask < (1L << (n * n)); ++mask) {
      auto edge = testing::digraph_from_mask(n, mask);
      mismatches += adt_recursive(testing::realise_digraph(edge, rng)) != testing::oracle_recursive(edge);
      ++exhaustive;
    }
  }
  long classes = testing::for_each_unlabeled_digraph(5, [&](long mask) {
    auto edge = testing::digraph_from_mask(5, mask);
    mismatches += adt_recursive(testing::realise_digraph(edge, rng)) != testing::oracle_recursive(edge);
  });
  if (classes != 291968) o.fail("enumerated " + std::to_string(classes) + " five-sort classes, expected 291968");
  for (int round = 0; round < 50000; ++round) {
    auto edge = testing::random_digraph(6, 0.02 + 0.3 * (round % 50) / 50.0, rng);
    mismatches += adt_recursive(testing::realise_digraph(edge, rng)) != testing::oracle_recursive(edge);
    ++sampled;
  }
  if (mismatches) o.fail(std::to_string(mismatches) + " adt_recursive mismatches against the oracle");
  std::string coverage = "corpus " + std::to_string(corpus_ok) + "/" + std::to_string(files.size()) +
                         "; oracle agrees on all " + std::to_string(exhaustive) +
                         " labeled graphs with <=4 sorts, all " + std::to_string(classes) +
                         " 5-sort graphs up to isomorphism and " + std::to_string(sampled) +
                         " sampled 6-sort graphs";
  if (o.pass) {
    // Every 6-sort graph means 2^36 labelings, 96928992 up to isomorphism;
    // neither fits the time budget.
    o.pass = false;
    o.detail = coverage + "; exhaustive enumeration of 6-sort graphs is not performed";
  } else {
    o.detail = coverage + "; " + o.detail;
  }
  return o;
}

Outcome normalizer_properties() {
  Outcome o;
  std::vector<fs::path> files = testing::fixture_files("categorize");
  for (const auto& f : testing::fixture_files("competition/benchmarks")) files.push_back(f);
  int round_trips = 0, preserved = 0;
  for (const auto& f : files) {
    std::string text = testing::read_file(f);
    Script s;
    try {
      s = parse_script(text);
    } catch (const Error&) {
      continue;
    }
    std::string once = print_script(s);
    if (print_script(parse_script(once)) != once || parse_script(once) != s) {
      o.fail(f.filename().string() + ": print/parse round trip unstable");
    }
    ++round_trips;
    NormalizationResult n = normalize(s);
    if (!n.ok()) continue;
    if (normalize(*n.script).transformations.size() != 0) o.fail(f.filename().string() + ": normalize not idempotent");
    if (categorize_text(print_script(*n.script)) != categorize_text(text)) {
      o.fail(f.filename().string() + ": track changed by normalization");
    } else {
      ++preserved;
    }
  }

  std::mt19937 rng(4);
  int merges = 0;
  for (int round = 0; round < 500; ++round) {
    testing::GenOptions opt;
    opt.queries = 1 + static_cast<int>(rng() % 4);
    ChcSystem sys = to_chc_system(parse_script(testing::random_chc(rng, opt)));
    ChcSystem merged = merge_queries(sys);
    if (merged.query_count() != 1 || merge_queries(merged) != merged) o.fail("merge_queries property violated");
    ++merges;
  }

  int perturbations = 0;
  for (int round = 0; round < 300; ++round) {
    std::string text = testing::random_chc(rng);
    std::string fp = fingerprint(parse_script(text));
    for (int k = 0; k < 4; ++k) {
      if (fingerprint(parse_script(testing::perturb(text, rng))) != fp) o.fail("fingerprint changed under perturbation");
      ++perturbations;
    }
  }
  if (o.pass) {
    o.detail = std::to_string(round_trips) + " corpus round trips, " + std::to_string(preserved) +
               " tracks preserved, " + std::to_string(merges) + " merge checks, " +
               std::to_string(perturbations) + " fingerprint perturbations";
  }
  return o;
}

// Ranking CSV restricted to the columns of the hand-computed expectation.
std::vector<std::string> project_ranking(const std::string& csv) {
  static const std::vector<std::string> keep = {"rank", "solver", "score", "sat", "unsat", "unique", "hors_concours"};
  auto rows = lines_of(csv);
  std::vector<std::string> out;
  if (rows.empty()) return out;
  auto header = split_csv_line(rows[0]);
  std::vector<std::size_t> idx;
  for (const auto& k : keep) {
    auto it = std::find(header.begin(), header.end(), k);
    if (it == header.end()) return {};
    idx.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  for (const auto& r : rows) {
    auto f = split_csv_line(r);
    std::string line;
    for (std::size_t i = 0; i < idx.size(); ++i) line += (i ? "," : "") + f[idx[i]];
    out.push_back(line);
  }
  return out;
}

Outcome end_to_end() {
  Outcome o;
  testing::TempDir dir;
  fs::path err = dir.path() / "err";
  fs::path bench = dir.path() / "bench";
  fs::path registry = testing::write_competition_registry(dir.path());
  testing::write_file(dir.path() / "cfg.json",
                      R"({"presets": {"desk": {"cpu_seconds": 5, "wall_seconds": 5}}, "preset": "desk", "parallelism": 4})");
  std::string cfg = " --config " + q(dir.path() / "cfg.json");

  auto fmt = cli("format" + cfg + " --out-dir " + q(bench) + " --report " + q(dir.path() / "format.jsonl") +
                     " " + q(testing::competition_dir() / "benchmarks"),
                 err);
  if (fmt.status != 0) {
    o.fail("format failed: " + testing::read_file(err));
    return o;
  }
  auto cat = cli("categorize " + q(bench), err);
  auto labels = lines_of(cat.out);
  if (labels.size() != 20) o.fail("categorize listed " + std::to_string(labels.size()) + " benchmarks");
  for (const auto& l : labels) {
    if (l.substr(l.find('\t') + 1) != "LIA-lin") o.fail("unexpected track: " + l);
  }
  auto run = cli("run" + cfg + " --solvers " + q(registry) + " -o " + q(dir.path() / "jobs.csv") + " " + q(bench), err);
  if (run.status != 0) {
    o.fail("run failed: " + testing::read_file(err));
    return o;
  }
  auto records = parse_job_csv(testing::read_file(dir.path() / "jobs.csv"));
  if (records.size() != 80) o.fail("expected 80 job records, got " + std::to_string(records.size()));
  for (const auto& r : records) {
    if (r.solver == "beta" && fs::path(r.benchmark).filename() == "b19.smt2" &&
        (r.status != Status::Timeout || r.result != Result::Unknown)) {
      o.fail("beta on b19 should time out");
    }
  }
  auto sc = cli("score --solvers " + q(registry) + " --ranking-csv " + q(dir.path() / "rank.csv") +
                    " --inconsistencies " + q(dir.path() / "inc.jsonl") + " " + q(dir.path() / "jobs.csv"),
                err);
  if (sc.status != 0) {
    o.fail("score failed: " + testing::read_file(err));
    return o;
  }
  std::string ranking_csv = testing::read_file(dir.path() / "rank.csv");
  if (project_ranking(ranking_csv) != lines_of(testing::read_file(testing::competition_dir() / "expected_ranking.csv"))) {
    o.fail("ranking differs from the hand computation:\n" + ranking_csv);
  }
  auto oracle = testing::oracle_unique(records);
  for (const auto& line : project_ranking(ranking_csv)) {
    auto f = split_csv_line(line);
    if (f[1] != "solver" && std::to_string(oracle[f[1]]) != f[5]) o.fail("unique count of " + f[1] + " differs from the oracle");
  }
  auto inc = lines_of(testing::read_file(dir.path() / "inc.jsonl"));
  if (inc.size() != 1) {
    o.fail(std::to_string(inc.size()) + " inconsistency records instead of 1");
  } else {
    auto j = nlohmann::json::parse(inc[0]);
    if (fs::path(j["benchmark"].get<std::string>()).filename() != "b08.smt2" ||
        j["sat"] != nlohmann::json::array({"alpha"}) || j["unsat"] != nlohmann::json::array({"gamma"})) {
      o.fail("wrong inconsistency: " + inc[0]);
    }
  }
  if (o.pass) {
    o.detail = "format, categorize, run (80 jobs, 5 s preset), score: ranking, unique counts and "
               "the b08 alpha/gamma inconsistency as expected";
  }
  return o;
}

std::vector<std::string> without_times(const std::string& csv) {
  std::vector<std::string> out;
  for (const auto& line : lines_of(csv)) {
    auto f = split_csv_line(line);
    f.resize(5);
    std::string joined;
    for (const auto& x : f) joined += x + ",";
    out.push_back(joined);
  }
  return out;
}

Outcome runner_determinism() {
  Outcome o;
  testing::TempDir dir;
  fs::path err = dir.path() / "err";
  fs::path registry = testing::write_competition_registry(dir.path());
  auto reg = nlohmann::json::parse(testing::read_file(registry));
  reg.push_back({{"solver", "forker"},
                 {"command", {STUB_SOLVER, "--spawn", "30", "--verdict", "unknown", "{benchmark}"}}});
  testing::write_file(registry, reg.dump());
  std::string base = "run --solvers " + q(registry) + " --cpu-limit 2 --wall-limit 2 " +
                     q(testing::competition_dir() / "benchmarks");

  std::string csv[2];
  int jobs[2] = {1, 8};
  for (int k = 0; k < 2; ++k) {
    auto r = cli(base + " -j " + std::to_string(jobs[k]), err);
    if (r.status != 0) o.fail("run -j " + std::to_string(jobs[k]) + " failed: " + testing::read_file(err));
    csv[k] = r.out;
    int left = testing::count_processes(getpid(), "stub_solver");
    if (left) o.fail(std::to_string(left) + " stub processes survived run -j " + std::to_string(jobs[k]));
  }
  if (without_times(csv[0]) != without_times(csv[1])) o.fail("CSV at -j 1 and -j 8 differ beyond timing columns");
  auto records = parse_job_csv(csv[0]);
  bool timeout_seen = false;
  for (const auto& r : records) {
    if (r.solver == "beta" && fs::path(r.benchmark).filename() == "b19.smt2") {
      timeout_seen = r.status == Status::Timeout && r.result == Result::Unknown;
    }
  }
  if (!timeout_seen) o.fail("wall-limit overrun was not recorded as (unknown, timeout)");
  if (o.pass) {
    o.detail = std::to_string(records.size()) + " jobs identical at -j 1 and -j 8 apart from times; "
               "b19/beta is (unknown, timeout); no stub processes left";
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* title;
    double budget_seconds;
    std::function<Outcome()> check;
  };
  const Criterion criteria[] = {
      {1, "selection counts", 1, selection_counts},
      {2, "score arithmetic", 1, score_arithmetic},
      {3, "categorizer properties", 10, categorizer_properties},
      {4, "normalizer properties", 30, normalizer_properties},
      {5, "end-to-end desk competition", 180, end_to_end},
      {6, "runner determinism", 60, runner_determinism},
  };
  bool all = true;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_seconds) o.fail("took longer than the budget");
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.number << " (" << c.title << ", "
              << std::fixed << std::setprecision(2) << secs << "s of " << std::setprecision(0)
              << c.budget_seconds << "s): " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
