#pragma once

#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "chccomp/chc.hpp"
#include "chccomp/script.hpp"

namespace chccomp {

/// Reserved prefix of the nullary predicate introduced by merge_queries.
inline constexpr const char* kMergedQueryPrefix = "CHC_COMP_QUERY_";

/// Rewrites k > 1 queries `body => false` into `body => G` plus one clause
/// `G => false` over a fresh nullary predicate G. Identity when k <= 1.
ChcSystem merge_queries(const ChcSystem& system);

/// Connected components of the undirected "constructor field mentions sort"
/// graph. Components are ordered by their earliest member; members keep
/// declaration order.
std::vector<std::vector<DatatypeDecl>> group_datatypes(const std::vector<DatatypeDecl>& decls);

enum class Transformation { SetLogic, ReorderCommands, GroupDatatypes, MergeQueries, AddCheckSat };

const char* to_string(Transformation t);

enum class RejectionKind { NotHorn, UnsupportedCommand, ParametricDatatype, QueryCount, Malformed };

const char* to_string(RejectionKind k);

struct Rejection {
  RejectionKind kind;
  std::string message;
};

struct NormalizationOptions {
  bool merge_queries = true;
};

struct NormalizationResult {
  std::optional<Script> script;  // set iff not rejected
  std::vector<Transformation> transformations;
  std::optional<Rejection> rejection;

  bool ok() const noexcept { return script.has_value(); }
};

/// Produces a conformant script: `(set-logic HORN)`, set-info, datatype
/// groups, predicate declarations, asserts in original order, exactly one
/// query, one `check-sat`, then optional `get-model`/`exit`.
/// Never throws for benchmark-level problems; those become a Rejection.
NormalizationResult normalize(const Script& script, const NormalizationOptions& options = {});

/// Parses then normalizes; frontend errors are mapped to rejections.
NormalizationResult normalize_text(const std::string& text, const NormalizationOptions& options = {});

/// The script hashed by `fingerprint`: set-info dropped, bound variables
/// renamed v0, v1, ... per command in binding order, declarations sorted by
/// (kind, name). `script` should already be normalized.
Script canonical_form(const Script& script);

/// Hex SHA-256 of the printed canonical form of the normalized script.
/// Throws Error if the script does not normalize.
std::string fingerprint(const Script& script);

/// Thread-safe first-writer-wins set of fingerprints.
class FingerprintIndex {
 public:
  /// Returns the owner already registered for `fp`, or registers `owner`.
  std::optional<std::string> insert(const std::string& fp, const std::string& owner);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::string> owners_;
};

}  // namespace chccomp
