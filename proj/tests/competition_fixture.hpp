#pragma once

// Solver registry for the four scripted solvers of fixtures/competition.

#include <string>

#include <nlohmann/json.hpp>

#include "helpers.hpp"

namespace testing {

inline fs::path competition_dir() { return fs::path(FIXTURE_DIR) / "competition"; }

inline fs::path write_competition_registry(const fs::path& dir) {
  nlohmann::json reg = nlohmann::json::array();
  for (const char* name : {"alpha", "beta", "gamma", "delta"}) {
    std::string table = (competition_dir() / "solvers" / (std::string(name) + ".tsv")).string();
    reg.push_back({{"solver", name},
                   {"command", {STUB_SOLVER, "--table", table, "--verdict", "unknown", "{benchmark}"}},
                   {"hors_concours", std::string(name) == "delta"}});
  }
  fs::path out = dir / "solvers.json";
  write_file(out, reg.dump(2));
  return out;
}

}  // namespace testing
