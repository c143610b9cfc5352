#include "chccomp/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace chccomp {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& obj, const char* key, T& into) {
  if (obj.contains(key)) into = obj.at(key).get<T>();
}

void read_selection(const json& s, SelectionPolicy& p) {
  check_keys(s, "selection",
             {"seed", "rating_timeout", "fractions", "caps", "take_all_tracks",
              "single_solver_tracks"});
  read(s, "seed", p.seed);
  read(s, "rating_timeout", p.rating_timeout);
  if (s.contains("fractions")) {
    const json& f = s["fractions"];
    check_keys(f, "selection.fractions", {"a", "bw", "br", "c", "solved", "unsolved"});
    read(f, "a", p.fractions.a);
    read(f, "bw", p.fractions.bw);
    read(f, "br", p.fractions.br);
    read(f, "c", p.fractions.c);
    read(f, "solved", p.fractions.solved);
    read(f, "unsolved", p.fractions.unsolved);
  }
  read(s, "caps", p.caps);
  read(s, "take_all_tracks", p.take_all_tracks);
  read(s, "single_solver_tracks", p.single_solver_tracks);
}

}  // namespace

const ResourceLimits& PipelineConfig::limits() const {
  auto it = presets.find(preset);
  if (it == presets.end()) throw ConfigError("unknown resource preset '" + preset + "'");
  return it->second;
}

PipelineConfig parse_config(const std::string& json_text) {
  PipelineConfig cfg;
  try {
    json doc = json::parse(json_text);
    check_keys(doc, "configuration",
               {"paths", "selection", "presets", "preset", "parallelism", "seed", "merge_queries"});
    if (doc.contains("paths")) {
      const json& p = doc["paths"];
      check_keys(p, "paths", {"benchmark_roots", "out_dir", "quarantine_dir", "solver_registry"});
      read(p, "benchmark_roots", cfg.benchmark_roots);
      read(p, "out_dir", cfg.out_dir);
      read(p, "quarantine_dir", cfg.quarantine_dir);
      read(p, "solver_registry", cfg.solver_registry);
    }
    if (doc.contains("selection")) read_selection(doc["selection"], cfg.selection);
    // A top-level seed is shorthand for selection.seed.
    read(doc, "seed", cfg.selection.seed);
    if (doc.contains("presets")) {
      const json& ps = doc["presets"];
      if (!ps.is_object()) throw ConfigError("presets must be an object");
      for (const auto& [name, v] : ps.items()) {
        if (name == "test" || name == "competition") {
          throw ConfigError("preset '" + name + "' is built in and cannot be redefined");
        }
        check_keys(v, "presets." + name, {"cpu_seconds", "wall_seconds", "memory_bytes"});
        ResourceLimits l;
        read(v, "cpu_seconds", l.cpu_seconds);
        read(v, "wall_seconds", l.wall_seconds);
        read(v, "memory_bytes", l.memory_bytes);
        l.validate();
        cfg.presets[name] = l;
      }
    }
    read(doc, "preset", cfg.preset);
    read(doc, "parallelism", cfg.parallelism);
    read(doc, "merge_queries", cfg.merge_queries);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("configuration: ") + e.what());
  }
  if (cfg.parallelism < 1) throw ConfigError("parallelism must be at least 1");
  cfg.limits();
  try {
    cfg.selection.validate();
  } catch (const SelectionError& e) {
    throw ConfigError(std::string("selection: ") + e.what());
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace chccomp
