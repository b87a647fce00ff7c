#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace evkg {

// Coarse POS classes used by the pattern slots.
enum class Pos : uint8_t {
  Noun,         // NN, NNS, NNP, NNPS
  Verb,         // VB* with lemma != "be"
  BeVerb,       // VB* with lemma == "be"
  Adjective,    // JJ, JJR, JJS
  Preposition,  // IN, TO
  Pronoun,      // PRP, PRP$
  Other,        // everything else (MD, RB, DT, CD, ...)
};

// Maps a Penn Treebank tag (or, as fallback, a UD UPOS tag) to the coarse class.
Pos pos_from_tag(std::string_view tag, std::string_view lemma);
const char* pos_code(Pos p);  // "n" "v" "be" "a" "p" "pr" "x"

struct Token {
  int index = 0;        // 0-based position in the sentence
  std::string surface;  // original form
  std::string lemma;
  Pos pos = Pos::Other;
  std::string ner = "none";  // one of the 13 supported labels, or "none"
};

struct DepEdge {
  int gov = 0;
  std::string label;
  int dep = 0;
  friend auto operator<=>(const DepEdge& a, const DepEdge& b) {
    return std::tie(a.gov, a.label, a.dep) <=> std::tie(b.gov, b.label, b.dep);
  }
  friend bool operator==(const DepEdge&, const DepEdge&) = default;
};

struct ParsedSentence {
  std::string doc_id;
  int para_id = 0;
  int sent_id = 0;
  std::vector<Token> tokens;
  std::vector<DepEdge> deps;

  // Throws ParseError on out-of-range indices, self-loops, or a token with
  // two governors. `line` is forwarded for error messages.
  void validate(long line = 0) const;

  // Governor index of `tok`, or -1 for roots. Assumes validate() passed.
  int head_of(int tok) const;
  const DepEdge* incoming(int tok) const;
  std::vector<const DepEdge*> outgoing(int tok) const;

  bool is_punct(int tok) const;
};

// One clause produced by split_clauses: token indices, ascending.
struct Clause {
  int clause_id = 0;
  std::vector<int> tokens;
  bool contains(int tok) const;
};

// The 14 discourse relation types plus Co-Occurrence.
enum class RelType : uint8_t {
  Precedence,
  Succession,
  Synchronous,
  Reason,
  Result,
  Condition,
  Contrast,
  Concession,
  Conjunction,
  Instantiation,
  Restatement,
  Alternative,
  ChosenAlternative,
  Exception,
  CoOccurrence,
};

inline constexpr int kRelTypeCount = 15;
extern const std::array<const char*, kRelTypeCount> kRelTypeNames;
const char* rel_name(RelType t);
std::optional<RelType> rel_from_name(std::string_view name);

// An extracted eventuality: a small hyperedge of tokens plus the dependency
// edges among them. Token/edge indices stay in sentence coordinates.
struct Eventuality {
  std::string pattern;            // code from the pattern table ("s-v-o", ...)
  std::vector<Token> words;       // skeleton + consumed optional tokens, ascending index
  std::vector<int> skeleton;      // sentence indices of the positive-edge slots
  std::vector<DepEdge> edges;     // consumed edges (positive + optional), sentence indices
  double weight = 1.0;            // instance weight (frequency contribution)
  std::string doc_id;
  int para_id = 0;
  int sent_id = 0;

  std::string eid;        // content hash, filled by the extractor
  std::string canonical;  // preimage of eid

  const Token* token_at(int sentence_index) const;
  std::vector<std::string> word_lemmas() const;
  std::vector<std::string> skeleton_lemmas() const;
  std::vector<std::string> verb_lemmas() const;  // lemmas of non-be verbs
  std::set<std::string> lemma_set() const;
  int first_token_index() const;
  std::string text() const;  // space-joined word lemmas, for reports
};

struct Provenance {
  std::string doc_id;
  int para_id = 0;
  int sent_id = 0;
  std::string connective;  // matched phrase, or "" for co-occurrence
};

// One relation observation prior to aggregation.
struct RelationInstance {
  std::string head_eid;
  std::string tail_eid;
  RelType type = RelType::CoOccurrence;
  double weight = 1.0;
  Provenance prov;
};

}  // namespace evkg
