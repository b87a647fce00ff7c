#pragma once

// Shared fixtures: hand-built dependency parses for every pattern, the two
// worked examples used across suites, corpus file writers, and a synthetic
// corpus generator for determinism/throughput tests.

#include <cstdint>
#include <string>
#include <vector>

#include "evkg/conceptualize.hpp"
#include "evkg/ingest.hpp"
#include "evkg/store.hpp"
#include "evkg/types.hpp"

namespace evkg::test {

Token tok(int i, const std::string& surface, const std::string& lemma,
          const std::string& tag, const std::string& ner = "none");
ParsedSentence sent(const std::string& doc, int para, int sid,
                    std::vector<Token> toks, std::vector<DepEdge> deps);

// Builds an Eventuality directly (bypassing the matcher) with eid filled in.
Eventuality make_ev(const std::string& pattern, std::vector<Token> words,
                    std::vector<int> skeleton, std::vector<DepEdge> edges,
                    double weight);

struct PatternCase {
  std::string code;
  std::string text;
  ParsedSentence sentence;
};

// One example sentence per pattern, in table order.
const std::vector<PatternCase>& pattern_cases();
ParsedSentence have_book();  // must yield s-v-o, never s-v

// Two-sentence demo: "My army will find your boat. In the meantime, I'm
// sure we could find you suitable accommodations."
std::vector<ParsedSentence> demo_two_sentences();
IsATable demo_isa();
std::string demo_isa_tsv();

// Restaurant fixture: seven aggregated eventualities plus two Result edges,
// seeded straight into a store. Expected concept arithmetic:
//   weight(PersonX be hungry)  = 1000 + 384 + 5     = 1389
//   weight(PersonX order Meat) = .069*(5+20+20) + .120*205 = 27.705
//   Result concept edge        = 1*.125*.069 + 1*1*.069    = 0.077625
void seed_restaurant(KgStore& store);
IsATable restaurant_isa();
std::string restaurant_isa_tsv();
extern const char* kCidHungry;  // cid of PersonX / be / hungry
extern const char* kCidMeat;    // cid of PersonX / order / Meat

std::string sent_jsonl(const ParsedSentence& s);
void write_corpus(const std::string& path,
                  const std::vector<ParsedSentence>& sents);

// Deterministic mix of plain sentences, medial and sentence-initial
// connectives, and modifier-heavy objects. Same (n, seed) = same corpus.
std::vector<ParsedSentence> synthetic_corpus(size_t n, uint64_t seed);

std::string temp_dir(const std::string& hint);  // fresh directory
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace evkg::test
