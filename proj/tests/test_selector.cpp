#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "chccomp/selector.hpp"
#include "published_results.hpp"

using namespace chccomp;

namespace {

std::vector<std::string> members(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + "/" + std::to_string(i) + ".smt2");
  return out;
}

RepoPool two_solver_pool(const published::TwoSolverRow& row) {
  RepoPool p{row.repository, row.track, {}};
  std::string base = std::string(row.track) + "/" + row.repository;
  p.buckets[Rating::A] = members(base + "/A", row.a);
  p.buckets[Rating::Bw] = members(base + "/Bw", row.bw);
  p.buckets[Rating::Br] = members(base + "/Br", row.br);
  p.buckets[Rating::C] = members(base + "/C", row.c);
  return p;
}

RepoPool single_solver_pool(const published::SingleSolverRow& row) {
  RepoPool p{row.repository, row.track, {}};
  std::string base = std::string(row.track) + "/" + row.repository;
  p.buckets[Rating::SolvedB] = members(base + "/B", row.solved);
  p.buckets[Rating::UnsolvedC] = members(base + "/C", row.unsolved);
  return p;
}

SelectionPolicy published_policy() {
  SelectionPolicy policy;
  for (const auto& r : published::two_solver_rows()) policy.caps[r.track][r.repository] = r.cap;
  for (const auto& r : published::single_solver_rows()) policy.caps[r.track][r.repository] = r.cap;
  return policy;
}

JobRecord rec(const std::string& bench, const std::string& solver, Result r, double cpu = 1.0) {
  return JobRecord{bench, solver, "default", r, Status::Complete, cpu, cpu};
}

}  // namespace

TEST_CASE("rating a benchmark from two reference solvers") {
  CHECK(rate_benchmark(rec("b", "w", Result::Sat), rec("b", "r", Result::Unsat)) == Rating::A);
  CHECK(rate_benchmark(rec("b", "w", Result::Sat), rec("b", "r", Result::Unknown)) == Rating::Bw);
  CHECK(rate_benchmark(rec("b", "w", Result::Unknown), rec("b", "r", Result::Sat)) == Rating::Br);
  CHECK(rate_benchmark(rec("b", "w", Result::Unknown), rec("b", "r", Result::Unknown)) == Rating::C);
  CHECK_THROWS_AS(rate_benchmark(rec("b", "w", Result::Sat), rec("c", "r", Result::Sat)),
                  MismatchedBenchmarkError);
  CHECK(rate_single(rec("b", "w", Result::Unsat)) == Rating::SolvedB);
  CHECK(rate_single(rec("b", "w", Result::Unknown)) == Rating::UnsolvedC);
}

TEST_CASE("rating spellings") {
  for (Rating r : {Rating::A, Rating::Bw, Rating::Br, Rating::C, Rating::Unrated}) {
    CHECK(parse_rating(to_string(r), false) == r);
  }
  for (Rating r : {Rating::SolvedB, Rating::UnsolvedC, Rating::Unrated}) {
    CHECK(parse_rating(to_string(r), true) == r);
  }
  CHECK_FALSE(parse_rating("Bw", true));
  CHECK_FALSE(parse_rating("B", false));
  CHECK_FALSE(parse_rating("D", false));
}

TEST_CASE("published selection sizes for two-solver tracks") {
  SelectionPolicy policy = published_policy();
  for (const auto& row : published::two_solver_rows()) {
    CAPTURE(row.track);
    CAPTURE(row.repository);
    auto picks = select_two_solver(two_solver_pool(row), policy);
    CHECK(static_cast<int>(picks.size()) == row.selected);
    TwoSolverTake t = two_solver_take(row.cap, row.a, row.bw, row.br, row.c, policy.fractions);
    CHECK(t.total() == row.selected);
  }
}

TEST_CASE("published selection sizes for single-solver tracks") {
  SelectionPolicy policy = published_policy();
  for (const auto& row : published::single_solver_rows()) {
    CAPTURE(row.repository);
    auto picks = select_single_solver(single_solver_pool(row), policy);
    CHECK(static_cast<int>(picks.size()) == row.selected);
  }
}

TEST_CASE("selection through select_all matches every published row") {
  SelectionPolicy policy = published_policy();
  std::vector<RepoPool> pools;
  std::map<std::pair<std::string, std::string>, int> expected;
  for (const auto& r : published::two_solver_rows()) {
    pools.push_back(two_solver_pool(r));
    expected[{r.track, r.repository}] = r.selected;
  }
  for (const auto& r : published::single_solver_rows()) {
    pools.push_back(single_solver_pool(r));
    expected[{r.track, r.repository}] = r.selected;
  }
  SelectionOutcome out = select_all(pools, policy);
  REQUIRE(out.summary.size() == expected.size());
  for (const auto& s : out.summary) {
    CAPTURE(s.track);
    CAPTURE(s.repository);
    CHECK(static_cast<int>(s.selected) == expected[{s.track, s.repository}]);
  }
  std::set<std::string> distinct;
  for (const auto& r : out.rows) distinct.insert(r.benchmark);
  CHECK(distinct.size() == out.rows.size());
}

TEST_CASE("stage sizes respect caps, bucket sizes and quotas") {
  std::mt19937 rng(41);
  SelectionFractions f;
  for (int round = 0; round < 20000; ++round) {
    int cap = 1 + static_cast<int>(rng() % 200);
    auto n = [&] { return static_cast<int>(rng() % 3 == 0 ? rng() % 5 : rng() % 300); };
    int a = n(), bw = n(), br = n(), c = n();
    TwoSolverTake t = two_solver_take(cap, a, bw, br, c, f);
    CHECK(t.a <= a);
    CHECK(t.bw <= bw);
    CHECK(t.br <= br);
    CHECK(t.c <= c);
    CHECK(t.total() <= cap);
    // A full stage gets exactly its floor quota.
    int q = cap / 5;
    if (a >= q) CHECK(t.a == q);
    if (a >= q && bw >= q && br >= q && c >= cap * 2 / 5) {
      CHECK(t.total() == q * 3 + cap * 2 / 5);
    }
    // Growing a bucket never shrinks the selection.
    CHECK(two_solver_take(cap, a + 1, bw, br, c, f).total() >= t.total());
    CHECK(two_solver_take(cap, a, bw, br, c + 1, f).total() >= t.total());

    int s = n(), u = n();
    SingleSolverTake st = single_solver_take(cap, s, u, f);
    CHECK(st.solved <= s);
    CHECK(st.unsolved <= u);
    CHECK(st.total() <= cap);
    if (s >= cap / 5) CHECK(st.solved == cap / 5);
  }
}

TEST_CASE("shortfalls cascade downward only") {
  SelectionFractions f;
  // A empty: its 20 go to Bw (10) and Br (10).
  TwoSolverTake t = two_solver_take(100, 0, 100, 100, 100, f);
  CHECK(t.bw == 30);
  CHECK(t.br == 30);
  CHECK(t.c == 40);
  // Odd shortfall: the extra unit goes to the winner side.
  t = two_solver_take(100, 19, 100, 100, 100, f);
  CHECK(t.bw == 21);
  CHECK(t.br == 20);
  // Br cannot absorb its share, so the rest falls to C, not Bw.
  t = two_solver_take(100, 0, 100, 5, 100, f);
  CHECK(t.bw == 30);
  CHECK(t.br == 5);
  CHECK(t.c == 65);
}

TEST_CASE("sampling is deterministic and order independent") {
  std::mt19937 rng(8);
  for (int round = 0; round < 300; ++round) {
    auto pool = members("r", 1 + static_cast<int>(rng() % 40));
    std::size_t k = rng() % (pool.size() + 3);
    std::uint64_t seed = rng();
    auto first = sample(pool, k, seed);
    CHECK(first.size() == std::min(k, pool.size()));
    std::set<std::string> uniq(first.begin(), first.end());
    CHECK(uniq.size() == first.size());
    for (const auto& m : first) CHECK(std::find(pool.begin(), pool.end(), m) != pool.end());
    std::shuffle(pool.begin(), pool.end(), rng);
    CHECK(sample(pool, k, seed) == first);
  }
}

TEST_CASE("sampling is close to uniform") {
  auto pool = members("u", 10);
  std::map<std::string, int> hits;
  const int trials = 20000;
  for (int s = 0; s < trials; ++s) {
    for (const auto& m : sample(pool, 3, static_cast<std::uint64_t>(s))) ++hits[m];
  }
  // Each member expects 6000 hits; allow five standard deviations.
  for (const auto& m : pool) {
    CAPTURE(m);
    CHECK(std::abs(hits[m] - 6000) < 5 * 65);
  }
}

TEST_CASE("different seeds give different selections") {
  SelectionPolicy a = published_policy(), b = published_policy();
  a.seed = 1;
  b.seed = 2;
  RepoPool pool = two_solver_pool(published::two_solver_rows()[8]);  // seahorn
  CHECK(select_two_solver(pool, a) != select_two_solver(pool, b));
  CHECK(select_two_solver(pool, a) == select_two_solver(pool, a));
}

TEST_CASE("take-all tracks keep every benchmark") {
  SelectionPolicy policy;
  RepoPool p{"repo", "LIA-lin-Arrays", {}};
  p.buckets[Rating::Unrated] = members("x", 57);
  SelectionOutcome out = select_all({p}, policy);
  CHECK(out.rows.size() == 57);
  CHECK_FALSE(out.summary[0].cap);
}

TEST_CASE("bucket manifests round trip") {
  SelectionPolicy policy = published_policy();
  std::vector<RepoPool> pools;
  for (const auto& r : published::two_solver_rows()) pools.push_back(two_solver_pool(r));
  for (const auto& r : published::single_solver_rows()) pools.push_back(single_solver_pool(r));
  std::sort(pools.begin(), pools.end(), [](const RepoPool& a, const RepoPool& b) {
    return std::tie(a.track, a.repository) < std::tie(b.track, b.repository);
  });
  std::string text = "# comment\n" + bucket_manifest(pools);
  std::istringstream in(text);
  auto back = read_bucket_manifest(in, policy);
  REQUIRE(back.size() == pools.size());
  for (std::size_t i = 0; i < pools.size(); ++i) {
    CHECK(back[i].track == pools[i].track);
    CHECK(back[i].repository == pools[i].repository);
    for (const auto& [rating, m] : pools[i].buckets) {
      if (m.empty()) continue;
      CHECK(back[i].buckets[rating] == m);
    }
  }
}

TEST_CASE("bad manifests are rejected") {
  SelectionPolicy policy;
  auto read = [&](const std::string& text) {
    std::istringstream in(text);
    return read_bucket_manifest(in, policy);
  };
  CHECK_THROWS_AS(read("LIA-lin\trepo\tA\n"), SelectionError);
  CHECK_THROWS_AS(read("LIA-lin\trepo\tQ\tb.smt2\n"), SelectionError);
  CHECK_THROWS_AS(read("LIA-lin\trepo\t-\tb.smt2\n"), SelectionError);
  CHECK_THROWS_AS(read("ADT-LIA-nonlin\trepo\tBw\tb.smt2\n"), SelectionError);
  CHECK(read("ADT-LIA-nonlin\trepo\tB\tb.smt2\r\n")[0].buckets.count(Rating::SolvedB));

  RepoPool dup{"repo", "LIA-lin", {}};
  dup.buckets[Rating::A] = {"x.smt2"};
  dup.buckets[Rating::C] = {"x.smt2"};
  policy.caps["LIA-lin"]["repo"] = 5;
  CHECK_THROWS_AS(select_two_solver(dup, policy), SelectionError);
  RepoPool uncapped{"other", "LIA-lin", {}};
  CHECK_THROWS_AS(select_all({uncapped}, policy), SelectionError);
}

TEST_CASE("policy validation") {
  SelectionPolicy p;
  CHECK_NOTHROW(p.validate());
  p.fractions.a = 0.5;
  CHECK_THROWS_AS(p.validate(), SelectionError);
  p = SelectionPolicy{};
  p.fractions.unsolved = -0.1;
  CHECK_THROWS_AS(p.validate(), SelectionError);
  p = SelectionPolicy{};
  p.caps["LIA-lin"]["r"] = 0;
  CHECK_THROWS_AS(p.validate(), SelectionError);
  p = SelectionPolicy{};
  p.rating_timeout = 0;
  CHECK_THROWS_AS(p.validate(), SelectionError);
}

TEST_CASE("rating a campaign") {
  std::vector<JobRecord> recs = {
      rec("bench/aeval/1.smt2", "W", Result::Sat), rec("bench/aeval/1.smt2", "R", Result::Sat),
      rec("bench/aeval/2.smt2", "W", Result::Sat), rec("bench/aeval/2.smt2", "R", Result::Sat, 31.0),
      rec("bench/hcai/3.smt2", "W", Result::Unknown), rec("bench/hcai/3.smt2", "R", Result::Unsat),
      rec("bench/hcai/4.smt2", "W", Result::Unknown), rec("bench/hcai/4.smt2", "R", Result::Unknown),
      rec("bench/hcai/4.smt2", "X", Result::Sat), rec("top.smt2", "W", Result::Sat),
      rec("top.smt2", "R", Result::Sat, 30.0),
  };
  auto pools = rate_campaign(recs, "LIA-lin", "W", std::string("R"), 30.0);
  REQUIRE(pools.size() == 3);
  CHECK(pools[0].repository == ".");
  CHECK(pools[0].buckets[Rating::A] == std::vector<std::string>{"top.smt2"});
  CHECK(pools[1].repository == "aeval");
  CHECK(pools[1].buckets[Rating::A] == std::vector<std::string>{"bench/aeval/1.smt2"});
  CHECK(pools[1].buckets[Rating::Bw] == std::vector<std::string>{"bench/aeval/2.smt2"});
  CHECK(pools[2].buckets[Rating::Br] == std::vector<std::string>{"bench/hcai/3.smt2"});
  CHECK(pools[2].buckets[Rating::C] == std::vector<std::string>{"bench/hcai/4.smt2"});

  auto single = rate_campaign(recs, "ADT-LIA-nonlin", "R", std::nullopt, 30.0);
  CHECK(single[1].buckets[Rating::SolvedB] == std::vector<std::string>{"bench/aeval/1.smt2"});
  CHECK(single[1].buckets[Rating::UnsolvedC] == std::vector<std::string>{"bench/aeval/2.smt2"});

  recs.pop_back();
  CHECK_THROWS_AS(rate_campaign(recs, "LIA-lin", "W", std::string("R"), 30.0),
                  MismatchedBenchmarkError);
}
