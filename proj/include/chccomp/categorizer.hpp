#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chccomp/chc.hpp"

namespace chccomp {

/// Ordered by dominance: joining two verdicts keeps the larger one.
enum class LiaVerdict { NoArith, PureLIA, SemanticallyLinear, ExcludedNonlinearArith };

const char* to_string(LiaVerdict v);
LiaVerdict join(LiaVerdict a, LiaVerdict b);

struct TheorySet {
  bool uses_bool = false;
  bool uses_ints = false;
  bool uses_arrays = false;
  bool uses_adts = false;
  bool uses_reals = false;
  bool uses_other = false;  // bit-vectors, strings, uninterpreted sorts, ...
  bool adt_recursive = false;
  LiaVerdict lia_verdict = LiaVerdict::NoArith;
};

enum class Track {
  LIA_lin,
  LIA_nonlin,
  LIA_lin_Arrays,
  LIA_nonlin_Arrays,
  LIA_nonlin_Arrays_nonrecADT,
  ADT_LIA_nonlin,
  Uncategorized,
};

const char* track_name(Track t);
std::optional<Track> parse_track(const std::string& name);
const std::vector<Track>& competition_tracks();

struct TrackAssignment {
  Track track = Track::Uncategorized;
  std::string reason;  // set only for Uncategorized

  /// `LIA-lin`, ..., or `Uncategorized(<reason>)`.
  std::string label() const;
  friend bool operator==(const TrackAssignment&, const TrackAssignment&) = default;
};

/// Applies the competition's rules for `*`, `div`, `mod` and `abs` to a
/// constraint. Lets are expanded first.
LiaVerdict arith_linearity_verdict(const Term& term);

/// A term built only from numerals and `- + * div mod abs`.
bool is_constant_term(const Term& term);

/// True iff the constructor-field graph over the declared sorts has a cycle.
/// Sorts reached through array index/element sorts count as fields.
bool adt_recursive(const std::vector<DatatypeDecl>& group);

TheorySet detect_theories(const ChcSystem& system);
TrackAssignment assign_track(const ChcSystem& system);
TrackAssignment assign_track(const ChcSystem& system, const TheorySet& theories);

/// Parses, converts and categorizes benchmark text. Frontend and Horn-shape
/// failures become Uncategorized with the error as the reason.
TrackAssignment categorize_text(const std::string& text);

}  // namespace chccomp
