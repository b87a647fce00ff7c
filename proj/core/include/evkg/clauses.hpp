#pragma once

#include <vector>

#include "evkg/connectives.hpp"
#include "evkg/types.hpp"

namespace evkg {

// Splits a sentence into simple clauses, the unit the pattern matcher runs on.
//
// Two mechanisms combine:
//  1. dependency splits: a token whose incoming edge is advcl/ccomp/csubj/
//     parataxis (or conj between two verb-like heads) starts its own clause;
//     every token belongs to the clause of its nearest such ancestor.
//  2. lexical splits: each connective occurrence splits its surrounding
//     clause linearly at the occurrence's last token, which is removed.
//     Only the last token goes away, so "In the meantime, X" leaves a
//     verbless "In the" clause behind, matching how the discourse step
//     sees the sentence.
//
// Punctuation tokens belong to no clause. Clauses are ordered and numbered
// by first token. Empty clauses are dropped.
std::vector<Clause> split_clauses(const ParsedSentence& sent,
                                  const ConnectiveLexicon& lexicon);

// True if the label is one of the subordinate-clause triggers above
// (conj handled separately since it needs both endpoint POS).
bool is_clause_boundary_label(const std::string& label);

}  // namespace evkg
