#pragma once

#include <array>
#include <string>
#include <tuple>
#include <vector>

#include "evkg/infer.hpp"
#include "evkg/store.hpp"
#include "evkg/types.hpp"

namespace evkg {

// One distinct triple of the fact base.
struct Fact {
  std::string head;
  RelType type = RelType::CoOccurrence;
  std::string tail;
};

// How aggregated edge weights become fact multiplicities. Multiplicities
// only influence per-type fact-base sizes (the head-coverage denominator);
// pair counting is over distinct triples either way.
enum class MultiplicityMode { Round, Ceil, WeightExact };
const char* multiplicity_mode_name(MultiplicityMode m);
std::optional<MultiplicityMode> multiplicity_mode_from_name(
    std::string_view name);

struct FactSet {
  std::vector<Fact> facts;  // distinct triples, sorted (type, head, tail)
  std::array<double, kRelTypeCount> type_sizes{};  // multiset sizes
};

// Materializes the fact base from a store layer. Round mode drops triples
// whose weight rounds (half-to-even) to zero; WeightExact keeps every
// positive triple and uses raw weights as sizes. Co-Occurrence edges are
// excluded unless asked for.
FactSet expand_facts(const KgStore& store,
                     GraphLayer layer = GraphLayer::Event,
                     MultiplicityMode mode = MultiplicityMode::Round,
                     bool include_cooccurrence = false);
FactSet facts_from_triples(
    const std::vector<std::tuple<std::string, RelType, std::string, double>>&
        triples,
    MultiplicityMode mode = MultiplicityMode::Round);

// Variables: 0 = ?a, 1 = ?b (the head pair), 2 = ?f (the fresh join var).
struct Atom {
  int subj = 0;
  RelType type = RelType::CoOccurrence;
  int obj = 1;
  friend bool operator==(const Atom&, const Atom&) = default;
};
std::string atom_string(const Atom& a);

struct HornRule {
  std::vector<Atom> body;  // 1 or 2 atoms, closed and connected with head
  Atom head;               // always ⟨?a T ?b⟩
  double support = 0.0;          // distinct (a,b) pairs: body and head hold
  double head_coverage = 0.0;    // support / size of the head-type fact base
  double confidence = 0.0;       // support / distinct body pairs
  double pca_confidence = 0.0;   // support / body pairs whose ?a has some
                                 // head-type fact
  std::string to_string() const;  // "⟨?a T1 ?f⟩ ∧ ⟨?f T2 ?b⟩ ⇒ ⟨?a T3 ?b⟩"
};

// Scores one candidate rule against the fact base (metrics all zero when the
// body never fires).
HornRule score_rule(const std::vector<Atom>& body, RelType head_type,
                    const FactSet& facts);

struct MineOptions {
  double min_hc = 0.01;
  double min_pca = 0.1;
  int max_body = 2;
};

// Queue-refinement search over closed connected Horn rules (variables only,
// no self-loop atoms, the head atom never reappears in the body). Output is
// every rule meeting both thresholds, ordered by PCA confidence descending,
// head coverage descending, then canonical rule string.
std::vector<HornRule> mine(const FactSet& facts, MineOptions opts = {});

}  // namespace evkg
