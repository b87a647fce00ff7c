#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "evkg/connectives.hpp"
#include "evkg/types.hpp"

namespace evkg {

// Argument spans for one connective occurrence. Token indices; when `ps` is
// set A1 lives in the previous sentence, otherwise both args are in the
// current one.
struct Arguments {
  bool ps = false;
  std::vector<int> a1;
  std::vector<int> a2;
  ConnectiveOccurrence occ;
};

// Overlap coefficient |A∩B| / min(|A|,|B|). Throws Error on an empty side.
double simpson(const std::set<std::string>& a, const std::set<std::string>& b);

std::vector<ConnectiveOccurrence> detect_connectives(
    const ParsedSentence& sent, const ConnectiveLexicon& lexicon);

// Positional argument heuristic:
//  - medial connective: A1 = everything before it, A2 = everything after;
//  - sentence-initial with a verb before the first following comma
//    ("Because it rains, I stay"): A2 = that pre-comma span, A1 = the rest;
//  - sentence-initial otherwise: PS case, A1 = previous sentence, A2 =
//    current sentence minus the connective.
// Spans drop punctuation, then attribution-like governing clauses (a ccomp
// chain head such as "I'm sure ...") are stripped so the span is the actual
// complement content. Returns nullopt when either span ends up verbless or a
// PS case has no previous sentence.
std::optional<Arguments> extract_arguments(const ParsedSentence& cur,
                                           const ParsedSentence* prev,
                                           const ConnectiveOccurrence& occ);

// Exposed for tests: keeps only the ccomp-complement content of a span.
std::vector<int> strip_attribution(const ParsedSentence& sent,
                                   std::vector<int> span);

// Relations emitted for one sentence plus the unordered eid pairs that got
// discourse-linked (consumed by the co-occurrence pass).
struct DiscourseResult {
  std::vector<RelationInstance> instances;
  std::set<std::pair<std::string, std::string>> linked;
};

// Runs detect/extract/classify/match over every connective of `cur`.
// Matching selects eventualities whose word set overlaps the argument span
// with Simpson >= threshold; every (head, tail) pair gets weight
// 1/(|heads|*|tails|), so each connective contributes total weight 1.
DiscourseResult emit_relations(const ParsedSentence& cur,
                               const std::vector<Eventuality>& cur_evs,
                               const ParsedSentence* prev,
                               const std::vector<Eventuality>* prev_evs,
                               const ConnectiveLexicon& lexicon,
                               double simpson_threshold = 0.8);

// Same-sentence pairs not already discourse-linked in this sentence, weight
// 1.0, head = the eventuality appearing first (ties by eid).
std::vector<RelationInstance> emit_cooccurrence(
    const ParsedSentence& cur, const std::vector<Eventuality>& cur_evs,
    const std::set<std::pair<std::string, std::string>>& linked);

}  // namespace evkg
