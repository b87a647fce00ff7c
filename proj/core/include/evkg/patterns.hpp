#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "evkg/types.hpp"

namespace evkg {

enum class SlotClass : uint8_t { N, V, Be, A, There };

struct PatternSlot {
  std::string name;  // "n1", "v2", "be", "there", ...
  SlotClass cls = SlotClass::N;
};

// One positive edge of a pattern; indices into Pattern::slots.
struct PatternEdge {
  int gov = 0;
  std::string label;
  int dep = 0;
};

struct Pattern {
  std::string code;       // "s-v-o"
  std::string structure;  // surface-order chain, e.g. "n1-nsubj-(v1-iobj-n2)-dobj-n3"
  std::string example;
  std::vector<PatternSlot> slots;
  std::vector<PatternEdge> edges;
  int anchor = 0;  // slot index the scan binds first: first v slot, else the be slot
};

// Dependency labels consumable as optional modifiers of already-bound words.
extern const std::array<const char*, 6> kOptionalLabels;
// Labels invisible to the matcher: neither consumed nor disqualifying.
extern const std::array<const char*, 6> kIgnoredLabels;
bool is_optional_label(const std::string& label);
bool is_ignored_label(const std::string& label);

class PatternTable {
 public:
  // The 18-pattern table compiled in. Byte-for-byte the same rows as
  // core/data/patterns.tsv (a test diffs them).
  static const PatternTable& builtin();
  // code<TAB>structure<TAB>example rows; '#' comments skipped.
  static PatternTable load_tsv(const std::string& path);
  static PatternTable from_rows(
      const std::vector<std::array<std::string, 3>>& rows);

  const std::vector<Pattern>& patterns() const { return patterns_; }
  const Pattern* by_code(const std::string& code) const;

 private:
  std::vector<Pattern> patterns_;
};

// Parses a structure chain into slots/edges. Exposed for the table-diff test.
Pattern parse_pattern(const std::string& code, const std::string& structure,
                      const std::string& example);

// Tries to bind `pat` at `anchor` (a token index inside `clause`).
// `clause_deps` must be the clause-induced dependency subgraph. Implements
// the positive/optional/negative matching discipline: every pattern edge must
// bind, optional-label edges hanging off bound words are consumed recursively,
// and any remaining non-ignored edge touching a bound or consumed word kills
// the match.
std::optional<Eventuality> match_one(const ParsedSentence& sent,
                                     const Clause& clause,
                                     const std::vector<DepEdge>& clause_deps,
                                     int anchor, const Pattern& pat);

// Runs the whole table over every clause. Anchors are scanned in sentence
// order; a token consumed by an earlier eventuality in the same clause is not
// re-anchored (only the outermost of nested matches is kept). Patterns are
// tried in table order, first match wins, at most one eventuality per anchor.
// Fills eid/canonical/provenance on every result.
std::vector<Eventuality> extract_all(const ParsedSentence& sent,
                                     const std::vector<Clause>& clauses,
                                     const PatternTable& table);

// Convenience: clause-induced subgraph (both endpoints inside the clause).
std::vector<DepEdge> clause_subgraph(const ParsedSentence& sent,
                                     const Clause& clause);

}  // namespace evkg
