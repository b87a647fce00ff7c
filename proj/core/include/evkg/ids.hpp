#pragma once

#include <string>
#include <string_view>

#include "evkg/types.hpp"

namespace evkg {

// SHA-256 of `data`, hex-encoded and truncated to 128 bits (32 hex chars).
std::string digest128(std::string_view data);

// Canonical preimage for an eventuality id: words as "lemma/pos" in sentence
// order, then the consumed edges as sorted (gov-lemma,label,dep-lemma)
// triples. Pure function of (lemmas, POS, edges); token offsets don't bleed in.
std::string eventuality_canonical(const Eventuality& ev);
std::string eid_of(const Eventuality& ev);

// Concept ids hash the conceptualized (skeleton) word sequence only.
std::string concept_canonical(const std::vector<std::string>& concept_words);
std::string cid_of(const std::vector<std::string>& concept_words);

// Relation ids hash the concatenated endpoint ids.
std::string relation_canonical(std::string_view head_id, std::string_view tail_id);
std::string rid_of(std::string_view head_id, std::string_view tail_id);

}  // namespace evkg
