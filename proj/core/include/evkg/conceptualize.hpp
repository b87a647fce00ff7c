#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "evkg/store.hpp"
#include "evkg/types.hpp"

namespace evkg {

struct IsAEntry {
  std::string concept_word;
  double prob = 0.0;
};

// term -> ranked hypernym entries, probability descending, at most top_k per
// term. Loads either probability TSVs (child<TAB>concept<TAB>prob) or raw
// count TSVs; any value > 1 switches the whole file to count mode, which
// normalizes per child before ranking.
class IsATable {
 public:
  static IsATable load_tsv(const std::string& path, int top_k = 5);
  static IsATable from_rows(
      const std::vector<std::tuple<std::string, std::string, double>>& rows,
      int top_k = 5);

  // nullptr when the term is absent. Terms are matched lowercased.
  const std::vector<IsAEntry>* lookup(const std::string& term) const;
  size_t size() const { return entries_.size(); }

 private:
  void add(const std::string& term, const std::string& concept_word,
           double value);
  void finalize(int top_k, bool counts);
  std::map<std::string, std::vector<IsAEntry>> entries_;
};

struct TokenConceptualization {
  std::string source;
  std::string concept_word;
  double prob = 1.0;
};

// One concept candidate for a whole eventuality.
struct ConceptOption {
  std::vector<std::string> words;
  double prob = 1.0;
};

struct ConceptualizeOptions {
  double min_event_freq = 5.0;  // gate: only frequent eventualities
  size_t beam = 100;            // candidates kept per eventuality
  double min_concept_prob = 0.0;
};

struct ConceptualizeSummary {
  size_t eventualities = 0;  // eligible and processed
  size_t concepts = 0;       // concept rows after the pass
  size_t concept_event_edges = 0;
  size_t concept_concept_edges = 0;
};

class Conceptualizer {
 public:
  Conceptualizer(IsATable table, ConceptualizeOptions opts = {});

  // Context-free single-token rule: NER label (p=1), personal pronoun ->
  // PersonX (p=1), regular noun -> IsA entries, anything else -> empty.
  std::vector<TokenConceptualization> conceptualize_token(
      const Token& tok) const;

  // All concept candidates of one aggregated eventuality: per-token options
  // multiplied out over the skeleton, duplicates merged, sorted by
  // probability descending (ties by words ascending), truncated to the beam.
  // Pronoun placeholders are assigned within this eventuality alone.
  std::vector<ConceptOption> conceptualize_record(
      const EventualityRecord& rec) const;

  // Full pass over `store`: writes concepts for every gated eventuality, then
  // projects every eventuality-eventuality relation onto concept-event and
  // concept-concept edges (instance probability times relation weight, summed
  // over instances on each projected side).
  ConceptualizeSummary run(KgStore& store) const;

  const ConceptualizeOptions& options() const { return opts_; }

 private:
  std::vector<TokenConceptualization> skeleton_token_options(
      const EventualityRecord& rec, size_t skel_pos,
      std::map<std::string, std::string>& person_names) const;

  IsATable table_;
  ConceptualizeOptions opts_;
};

// True for pronoun lemmas that conceptualize to a person placeholder
// ("it"-like pronouns stay verbatim).
bool is_person_pronoun(const std::string& lemma);

// Recomputes sum over instances of Pr(C|E) * frequency(E) from the store.
double concept_weight(const ConceptRecord& rec, const KgStore& store);

}  // namespace evkg
