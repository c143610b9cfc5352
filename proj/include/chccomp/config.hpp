#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chccomp/runner.hpp"
#include "chccomp/selector.hpp"

namespace chccomp {

/// Everything a pipeline run needs besides its input files. Loaded from a
/// JSON document; command-line flags override individual fields.
struct PipelineConfig {
  std::vector<std::string> benchmark_roots;
  std::string out_dir;
  std::string quarantine_dir;  // defaults to <out_dir>/quarantine
  std::string solver_registry;
  SelectionPolicy selection;
  /// Always holds `test` and `competition`; further presets may be added.
  std::map<std::string, ResourceLimits> presets = {
      {"test", ResourceLimits::test()}, {"competition", ResourceLimits::competition()}};
  std::string preset = "test";
  int parallelism = 1;
  bool merge_queries = true;

  /// Throws ConfigError for unknown presets.
  const ResourceLimits& limits() const;
};

/// Throws ConfigError on malformed documents, unknown keys, or attempts to
/// redefine the built-in presets.
PipelineConfig parse_config(const std::string& json_text);
PipelineConfig load_config(const std::string& path);

}  // namespace chccomp
