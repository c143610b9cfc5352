// chccomp: command-line driver for the benchmark pipeline.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "chccomp/categorizer.hpp"
#include "chccomp/config.hpp"
#include "chccomp/frontend.hpp"
#include "chccomp/normalizer.hpp"
#include "chccomp/runner.hpp"
#include "chccomp/scorer.hpp"
#include "chccomp/selector.hpp"

namespace fs = std::filesystem;
using namespace chccomp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read '" + p.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  out << text;
}

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

struct InputFile {
  fs::path path;
  fs::path relative;  // name below an output directory
};

// Files are taken as given; directories contribute their *.smt2 files,
// sorted, with paths relative to the directory.
std::vector<InputFile> collect_inputs(const std::vector<std::string>& args) {
  std::vector<InputFile> out;
  for (const auto& a : args) {
    fs::path p(a);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::recursive_directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".smt2") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      for (auto& f : found) out.push_back({f, fs::relative(f, p)});
    } else if (fs::exists(p)) {
      out.push_back({p, p.filename()});
    } else {
      throw Error("no such file or directory: '" + a + "'");
    }
  }
  return out;
}

PipelineConfig load_or_default(const std::string& path) {
  return path.empty() ? PipelineConfig{} : load_config(path);
}

// Runs `fn(i)` for i in [0, n) on `jobs` threads.
template <typename F>
void parallel_for(std::size_t n, int jobs, F fn) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < jobs && static_cast<std::size_t>(k) < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

// ---- format ---------------------------------------------------------------

struct FormatArgs {
  std::string config;
  std::string out_dir;
  std::string quarantine_dir;
  std::string report;
  std::optional<bool> merge_queries;
  int jobs = 0;
  std::vector<std::string> inputs;
};

int cmd_format(const FormatArgs& a) {
  PipelineConfig cfg = load_or_default(a.config);
  if (!a.out_dir.empty()) cfg.out_dir = a.out_dir;
  if (!a.quarantine_dir.empty()) cfg.quarantine_dir = a.quarantine_dir;
  if (a.merge_queries) cfg.merge_queries = *a.merge_queries;
  if (a.jobs > 0) cfg.parallelism = a.jobs;
  if (cfg.out_dir.empty()) throw ConfigError("format needs an output directory (--out-dir)");
  fs::path out_dir(cfg.out_dir);
  fs::path quarantine = cfg.quarantine_dir.empty() ? out_dir / "quarantine" : fs::path(cfg.quarantine_dir);

  std::vector<std::string> roots = a.inputs.empty() ? cfg.benchmark_roots : a.inputs;
  auto inputs = collect_inputs(roots);

  struct Done {
    NormalizationResult result;
    std::string text;
    std::string fingerprint;
  };
  std::vector<Done> done(inputs.size());
  NormalizationOptions opts{cfg.merge_queries};
  parallel_for(inputs.size(), cfg.parallelism, [&](std::size_t i) {
    Done& d = done[i];
    try {
      d.result = normalize_text(slurp(inputs[i].path), opts);
    } catch (const Error& e) {
      d.result.rejection = Rejection{RejectionKind::Malformed, e.what()};
    }
    if (d.result.ok()) {
      d.text = print_script(*d.result.script);
      d.fingerprint = fingerprint(*d.result.script);
    }
  });

  // Dedup in input order so the first occurrence always wins.
  FingerprintIndex index;
  std::string report;
  std::size_t rejected = 0, duplicates = 0, written = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const Done& d = done[i];
    nlohmann::json rec;
    rec["input"] = inputs[i].path.string();
    nlohmann::json tr = nlohmann::json::array();
    for (auto t : d.result.transformations) tr.push_back(to_string(t));
    rec["transformations"] = tr;
    rec["output"] = nullptr;
    rec["fingerprint"] = nullptr;
    rec["duplicate_of"] = nullptr;
    rec["reason"] = nullptr;
    if (!d.result.ok()) {
      ++rejected;
      fs::path dest = quarantine / inputs[i].relative;
      fs::create_directories(dest.parent_path());
      fs::copy_file(inputs[i].path, dest, fs::copy_options::overwrite_existing);
      rec["status"] = "rejected";
      rec["quarantined"] = dest.string();
      rec["reason"] = {{"kind", to_string(d.result.rejection->kind)},
                       {"message", d.result.rejection->message}};
    } else {
      rec["fingerprint"] = d.fingerprint;
      if (auto owner = index.insert(d.fingerprint, inputs[i].path.string())) {
        ++duplicates;
        rec["status"] = "duplicate";
        rec["duplicate_of"] = *owner;
      } else {
        ++written;
        fs::path dest = out_dir / inputs[i].relative;
        write_file(dest, d.text);
        rec["status"] = "ok";
        rec["output"] = dest.string();
      }
    }
    report += rec.dump() + "\n";
  }
  emit(a.report.empty() ? (out_dir / "report.jsonl").string() : a.report, report);
  std::cerr << inputs.size() << " inputs: " << written << " written, " << duplicates
            << " duplicates, " << rejected << " rejected\n";
  return rejected ? kExitInput : kExitOk;
}

// ---- categorize -----------------------------------------------------------

int cmd_categorize(const std::string& config, const std::vector<std::string>& args,
                   const std::string& out) {
  PipelineConfig cfg = load_or_default(config);
  auto inputs = collect_inputs(args.empty() ? cfg.benchmark_roots : args);
  std::string manifest;
  for (const auto& in : inputs) {
    TrackAssignment t;
    try {
      t = categorize_text(slurp(in.path));
    } catch (const Error& e) {
      t = TrackAssignment{Track::Uncategorized, e.what()};
    }
    std::string label = t.label();
    std::replace_if(label.begin(), label.end(), [](char c) { return c == '\t' || c == '\n'; }, ' ');
    manifest += in.path.string() + "\t" + label + "\n";
  }
  emit(out, manifest);
  return kExitOk;
}

// ---- rate / select --------------------------------------------------------

struct RateArgs {
  std::string config;
  std::string track;
  std::string winner;
  std::string runner_up;
  std::optional<double> timeout;
  std::vector<std::string> csvs;
  std::string out;
};

std::vector<JobRecord> read_csvs(const std::vector<std::string>& paths) {
  std::vector<JobRecord> all;
  for (const auto& p : paths) {
    std::ifstream in(p);
    if (!in) throw Error("cannot read '" + p + "'");
    auto recs = read_job_csv(in);
    all.insert(all.end(), recs.begin(), recs.end());
  }
  return all;
}

int cmd_rate(const RateArgs& a) {
  PipelineConfig cfg = load_or_default(a.config);
  double timeout = a.timeout.value_or(cfg.selection.rating_timeout);
  std::optional<std::string> runner_up;
  if (!a.runner_up.empty()) runner_up = a.runner_up;
  auto pools = rate_campaign(read_csvs(a.csvs), a.track, a.winner, runner_up, timeout);
  emit(a.out, bucket_manifest(pools));
  return kExitOk;
}

struct SelectArgs {
  std::string config;
  std::vector<std::string> buckets;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_select(const SelectArgs& a) {
  PipelineConfig cfg = load_or_default(a.config);
  if (a.seed) cfg.selection.seed = *a.seed;
  std::string all;
  for (const auto& b : a.buckets) all += slurp(b) + "\n";
  std::istringstream in(all);
  auto pools = read_bucket_manifest(in, cfg.selection);
  SelectionOutcome outcome = select_all(pools, cfg.selection);
  emit(a.out, selection_manifest(outcome));
  for (const auto& s : outcome.summary) {
    std::cerr << s.track << "\t" << s.repository << "\t"
              << (s.cap ? std::to_string(*s.cap) : std::string("all")) << "\t" << s.selected
              << "\n";
  }
  return kExitOk;
}

// ---- run ------------------------------------------------------------------

struct RunArgs {
  std::string config;
  std::string solvers;
  std::string preset;
  std::optional<double> cpu_limit;
  std::optional<double> wall_limit;
  std::optional<std::uint64_t> memory_limit;
  int jobs = 0;
  std::string manifest;
  std::vector<std::string> inputs;
  std::string out;
};

std::vector<std::string> manifest_benchmarks(const std::string& path) {
  std::vector<std::string> out;
  std::istringstream in(slurp(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find_last_of('\t');
    out.push_back(tab == std::string::npos ? line : line.substr(tab + 1));
  }
  return out;
}

int cmd_run(const RunArgs& a) {
  PipelineConfig cfg = load_or_default(a.config);
  if (!a.solvers.empty()) cfg.solver_registry = a.solvers;
  if (!a.preset.empty()) cfg.preset = a.preset;
  if (a.jobs > 0) cfg.parallelism = a.jobs;
  ResourceLimits limits = cfg.limits();
  if (a.cpu_limit) limits.cpu_seconds = *a.cpu_limit;
  if (a.wall_limit) limits.wall_seconds = *a.wall_limit;
  if (a.memory_limit) limits.memory_bytes = *a.memory_limit;
  limits.validate();
  if (cfg.solver_registry.empty()) throw ConfigError("run needs a solver registry (--solvers)");

  std::ifstream reg(cfg.solver_registry);
  if (!reg) throw ConfigError("cannot read solver registry '" + cfg.solver_registry + "'");
  auto configs = read_solver_registry(reg, fs::path(cfg.solver_registry).parent_path().string());

  std::vector<std::string> benchmarks;
  if (!a.manifest.empty()) benchmarks = manifest_benchmarks(a.manifest);
  std::vector<std::string> roots = a.inputs;
  if (roots.empty() && a.manifest.empty()) roots = cfg.benchmark_roots;
  for (const auto& in : collect_inputs(roots)) benchmarks.push_back(in.path.string());

  if (!memory_limit_enforceable()) {
    std::cerr << "warning: memory limit not enforceable on this platform\n";
  }
  CampaignResult result = run_campaign(configs, benchmarks, limits, cfg.parallelism);
  emit(a.out, job_csv(result.records));
  for (const auto& e : result.errors) std::cerr << "error: " << e << "\n";
  return result.errors.empty() ? kExitOk : kExitInput;
}

// ---- score / report -------------------------------------------------------

struct ScoreArgs {
  std::string solvers;
  std::vector<std::string> hors_concours;
  std::vector<std::string> disqualify;
  std::vector<std::string> drop;
  std::vector<std::string> csvs;
  std::string ranking_csv;
  std::string inconsistencies;
};

std::set<std::string> hors_concours_set(const ScoreArgs& a) {
  std::set<std::string> hc(a.hors_concours.begin(), a.hors_concours.end());
  if (!a.solvers.empty()) {
    std::ifstream reg(a.solvers);
    if (!reg) throw ConfigError("cannot read solver registry '" + a.solvers + "'");
    for (const auto& c : read_solver_registry(reg)) {
      if (c.hors_concours) hc.insert(c.solver);
    }
  }
  return hc;
}

OrganizerActions actions_of(const ScoreArgs& a) {
  return {std::set<std::string>(a.disqualify.begin(), a.disqualify.end()),
          std::set<std::string>(a.drop.begin(), a.drop.end())};
}

int cmd_score(const ScoreArgs& a) {
  auto records = apply_actions(read_csvs(a.csvs), actions_of(a));
  auto ranking = rank(score(records, hors_concours_set(a)));
  auto found = find_inconsistencies(records);
  std::cout << ranking_table(ranking);
  if (!a.ranking_csv.empty()) write_file(a.ranking_csv, chccomp::ranking_csv(ranking));
  std::string jsonl = inconsistencies_jsonl(found);
  if (!a.inconsistencies.empty()) {
    write_file(a.inconsistencies, jsonl);
  } else if (!found.empty()) {
    std::cout << "\ninconsistencies:\n" << jsonl;
  }
  if (!found.empty()) {
    std::cerr << found.size() << " benchmark(s) with contradicting results\n";
  }
  return kExitOk;
}

// `track=jobs.csv` arguments; one detailed table per track plus winners.
int cmd_report(const ScoreArgs& a) {
  auto hc = hors_concours_set(a);
  auto actions = actions_of(a);
  std::vector<std::vector<std::string>> winners;
  std::string out;
  for (const auto& arg : a.csvs) {
    auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error("report arguments take the form TRACK=JOBS.csv, got '" + arg + "'");
    }
    std::string track = arg.substr(0, eq);
    auto records = apply_actions(read_csvs({arg.substr(eq + 1)}), actions);
    auto ranking = rank(score(records, hc));
    out += track + "\n" + ranking_table(ranking) + "\n";
    std::vector<std::string> row = {track, "-", "-", "-"};
    for (const auto& e : ranking) {
      if (e.place && *e.place <= 3) row[*e.place] = e.score.solver;
    }
    winners.push_back(row);
  }
  std::vector<std::size_t> w = {5, 6, 6, 6};
  for (const auto& r : winners) {
    for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
  }
  auto line = [&](const std::vector<std::string>& r) {
    std::string s;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) s += "  ";
      s += r[i] + std::string(w[i] - r[i].size(), ' ');
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s + "\n";
  };
  out += "Winners\n" + line({"Track", "Winner", "Second", "Third"});
  for (const auto& r : winners) out += line(r);
  std::cout << out;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CHC benchmark pipeline: format, categorize, select, run, score, report"};
  app.require_subcommand(1);
  std::function<int()> action;

  FormatArgs fa;
  auto* fmt = app.add_subcommand("format", "Normalize benchmarks and drop duplicates");
  fmt->alias("normalize");
  fmt->add_option("--config", fa.config, "JSON configuration");
  fmt->add_option("--out-dir", fa.out_dir, "Directory for normalized benchmarks");
  fmt->add_option("--quarantine-dir", fa.quarantine_dir, "Directory for rejected inputs");
  fmt->add_option("--merge-queries", fa.merge_queries, "Merge multiple queries (true/false)");
  fmt->add_option("--report", fa.report, "JSON-lines report (default <out-dir>/report.jsonl)");
  fmt->add_option("-j,--jobs", fa.jobs, "Worker threads");
  fmt->add_option("inputs", fa.inputs, "Files or directories");
  fmt->callback([&] { action = [&] { return cmd_format(fa); }; });

  std::string cat_config, cat_out;
  std::vector<std::string> cat_inputs;
  auto* cat = app.add_subcommand("categorize", "Assign benchmarks to tracks");
  cat->add_option("--config", cat_config, "JSON configuration");
  cat->add_option("-o,--out", cat_out, "Manifest file (default stdout)");
  cat->add_option("inputs", cat_inputs, "Files or directories");
  cat->callback([&] { action = [&] { return cmd_categorize(cat_config, cat_inputs, cat_out); }; });

  RateArgs ra;
  auto* rate = app.add_subcommand("rate", "Turn a rating campaign into a bucket manifest");
  rate->add_option("--config", ra.config, "JSON configuration");
  rate->add_option("--track", ra.track, "Track being rated")->required();
  rate->add_option("--winner", ra.winner, "Reference solver (previous winner)")->required();
  rate->add_option("--runner-up", ra.runner_up, "Second reference solver");
  rate->add_option("--timeout", ra.timeout, "Rating timeout in CPU seconds");
  rate->add_option("-o,--out", ra.out, "Bucket manifest (default stdout)");
  rate->add_option("csvs", ra.csvs, "Job CSVs of the rating runs")->required();
  rate->callback([&] { action = [&] { return cmd_rate(ra); }; });

  SelectArgs sa;
  auto* sel = app.add_subcommand("select", "Select competition benchmarks from rated buckets");
  sel->add_option("--config", sa.config, "JSON configuration with caps and fractions");
  sel->add_option("--buckets", sa.buckets, "Bucket manifest(s)")->required();
  sel->add_option("--seed", sa.seed, "Sampling seed");
  sel->add_option("-o,--out", sa.out, "Selection manifest (default stdout)");
  sel->callback([&] { action = [&] { return cmd_select(sa); }; });

  RunArgs rna;
  auto* run = app.add_subcommand("run", "Run solvers on benchmarks");
  run->add_option("--config", rna.config, "JSON configuration");
  run->add_option("--solvers", rna.solvers, "Solver registry (JSON)");
  run->add_option("--preset", rna.preset, "Resource preset: test, competition, or custom");
  run->add_option("--cpu-limit", rna.cpu_limit, "CPU seconds");
  run->add_option("--wall-limit", rna.wall_limit, "Wall-clock seconds");
  run->add_option("--memory-limit", rna.memory_limit, "Memory bytes");
  run->add_option("-j,--jobs", rna.jobs, "Parallel jobs");
  run->add_option("--manifest", rna.manifest, "Benchmark list (last tab-separated column)");
  run->add_option("-o,--out", rna.out, "Job CSV (default stdout)");
  run->add_option("inputs", rna.inputs, "Benchmark files or directories");
  run->callback([&] { action = [&] { return cmd_run(rna); }; });

  ScoreArgs sc;
  auto add_score_opts = [&](CLI::App* sub) {
    sub->add_option("--solvers", sc.solvers, "Solver registry; hors-concours flags are read");
    sub->add_option("--hors-concours", sc.hors_concours, "Solver competing hors concours");
    sub->add_option("--disqualify", sc.disqualify, "Remove all records of a solver");
    sub->add_option("--drop-benchmark", sc.drop, "Remove all records of a benchmark");
  };
  auto* scr = app.add_subcommand("score", "Score and rank a job CSV");
  add_score_opts(scr);
  scr->add_option("--ranking-csv", sc.ranking_csv, "Write the ranking as CSV");
  scr->add_option("--inconsistencies", sc.inconsistencies, "Write inconsistencies as JSON lines");
  scr->add_option("csvs", sc.csvs, "Job CSVs")->required();
  scr->callback([&] { action = [&] { return cmd_score(sc); }; });

  auto* rep = app.add_subcommand("report", "Per-track tables and winners");
  add_score_opts(rep);
  rep->add_option("tracks", sc.csvs, "TRACK=JOBS.csv")->required();
  rep->callback([&] { action = [&] { return cmd_report(sc); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }
  try {
    return action();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
