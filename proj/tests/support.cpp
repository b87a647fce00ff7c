#include "support.hpp"

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "evkg/error.hpp"
#include "evkg/ids.hpp"
#include "evkg/rng.hpp"
#include "nlohmann/json.hpp"

namespace fs = std::filesystem;

namespace evkg::test {

Token tok(int i, const std::string& surface, const std::string& lemma,
          const std::string& tag, const std::string& ner) {
  Token t;
  t.index = i;
  t.surface = surface;
  t.lemma = lemma;
  t.pos = pos_from_tag(tag, lemma);
  t.ner = ner;
  return t;
}

ParsedSentence sent(const std::string& doc, int para, int sid,
                    std::vector<Token> toks, std::vector<DepEdge> deps) {
  ParsedSentence s;
  s.doc_id = doc;
  s.para_id = para;
  s.sent_id = sid;
  s.tokens = std::move(toks);
  s.deps = std::move(deps);
  s.validate();
  return s;
}

Eventuality make_ev(const std::string& pattern, std::vector<Token> words,
                    std::vector<int> skeleton, std::vector<DepEdge> edges,
                    double weight) {
  Eventuality ev;
  ev.pattern = pattern;
  ev.words = std::move(words);
  ev.skeleton = std::move(skeleton);
  ev.edges = std::move(edges);
  ev.weight = weight;
  ev.canonical = eventuality_canonical(ev);
  ev.eid = digest128(ev.canonical);
  return ev;
}

namespace {

ParsedSentence ps(const std::string& code, std::vector<Token> toks,
                  std::vector<DepEdge> deps) {
  return sent("tbl-" + code, 0, 0, std::move(toks), std::move(deps));
}

std::vector<PatternCase> build_pattern_cases() {
  std::vector<PatternCase> v;
  v.push_back({"s-v", "The dog barks.",
               ps("s-v",
                  {tok(0, "The", "the", "DT"), tok(1, "dog", "dog", "NN"),
                   tok(2, "barks", "bark", "VBZ"), tok(3, ".", ".", ".")},
                  {{2, "nsubj", 1}, {1, "det", 0}, {2, "punct", 3}})});
  v.push_back({"s-v-o", "I love you.",
               ps("s-v-o",
                  {tok(0, "I", "i", "PRP"), tok(1, "love", "love", "VBP"),
                   tok(2, "you", "you", "PRP"), tok(3, ".", ".", ".")},
                  {{1, "nsubj", 0}, {1, "dobj", 2}, {1, "punct", 3}})});
  v.push_back({"s-v-a", "He felt ill.",
               ps("s-v-a",
                  {tok(0, "He", "he", "PRP"), tok(1, "felt", "feel", "VBD"),
                   tok(2, "ill", "ill", "JJ"), tok(3, ".", ".", ".")},
                  {{1, "nsubj", 0}, {1, "xcomp", 2}, {1, "punct", 3}})});
  v.push_back({"s-v-v", "I want to go.",
               ps("s-v-v",
                  {tok(0, "I", "i", "PRP"), tok(1, "want", "want", "VBP"),
                   tok(2, "to", "to", "TO"), tok(3, "go", "go", "VB"),
                   tok(4, ".", ".", ".")},
                  {{1, "nsubj", 0}, {1, "xcomp", 3}, {3, "mark", 2},
                   {1, "punct", 4}})});
  v.push_back({"s-v-o-o", "You give me the book.",
               ps("s-v-o-o",
                  {tok(0, "You", "you", "PRP"), tok(1, "give", "give", "VBP"),
                   tok(2, "me", "me", "PRP"), tok(3, "the", "the", "DT"),
                   tok(4, "book", "book", "NN"), tok(5, ".", ".", ".")},
                  {{1, "nsubj", 0}, {1, "iobj", 2}, {1, "dobj", 4},
                   {4, "det", 3}, {1, "punct", 5}})});
  v.push_back({"s-v-v-o", "I want to eat the apple.",
               ps("s-v-v-o",
                  {tok(0, "I", "i", "PRP"), tok(1, "want", "want", "VBP"),
                   tok(2, "to", "to", "TO"), tok(3, "eat", "eat", "VB"),
                   tok(4, "the", "the", "DT"), tok(5, "apple", "apple", "NN"),
                   tok(6, ".", ".", ".")},
                  {{1, "nsubj", 0}, {1, "xcomp", 3}, {3, "mark", 2},
                   {3, "dobj", 5}, {5, "det", 4}, {1, "punct", 6}})});
  v.push_back({"s-v-o-v-o", "I ask you to help us.",
               ps("s-v-o-v-o",
                  {tok(0, "I", "i", "PRP"), tok(1, "ask", "ask", "VBP"),
                   tok(2, "you", "you", "PRP"), tok(3, "to", "to", "TO"),
                   tok(4, "help", "help", "VB"), tok(5, "us", "us", "PRP"),
                   tok(6, ".", ".", ".")},
                  {{1, "nsubj", 0}, {1, "dobj", 2}, {1, "xcomp", 4},
                   {4, "mark", 3}, {4, "dobj", 5}, {1, "punct", 6}})});
  v.push_back(
      {"s-v-o-v-o-o", "president urges the congress to make her citizen.",
       ps("s-v-o-v-o-o",
          {tok(0, "president", "president", "NN"),
           tok(1, "urges", "urge", "VBZ"), tok(2, "the", "the", "DT"),
           tok(3, "congress", "congress", "NN"), tok(4, "to", "to", "TO"),
           tok(5, "make", "make", "VB"), tok(6, "her", "her", "PRP$"),
           tok(7, "citizen", "citizen", "NN"), tok(8, ".", ".", ".")},
          {{1, "nsubj", 0}, {1, "dobj", 3}, {3, "det", 2}, {1, "xcomp", 5},
           {5, "mark", 4}, {5, "iobj", 6}, {5, "dobj", 7}, {1, "punct", 8}})});
  v.push_back({"s-be-a", "The dog is cute.",
               ps("s-be-a",
                  {tok(0, "The", "the", "DT"), tok(1, "dog", "dog", "NN"),
                   tok(2, "is", "be", "VBZ"), tok(3, "cute", "cute", "JJ"),
                   tok(4, ".", ".", ".")},
                  {{3, "nsubj", 1}, {1, "det", 0}, {3, "cop", 2},
                   {3, "punct", 4}})});
  v.push_back({"s-be-o", "He is a boy.",
               ps("s-be-o",
                  {tok(0, "He", "he", "PRP"), tok(1, "is", "be", "VBZ"),
                   tok(2, "a", "a", "DT"), tok(3, "boy", "boy", "NN"),
                   tok(4, ".", ".", ".")},
                  {{3, "nsubj", 0}, {3, "cop", 1}, {3, "det", 2},
                   {3, "punct", 4}})});
  v.push_back({"s-v-be-o", "I want to be a hero.",
               ps("s-v-be-o",
                  {tok(0, "I", "i", "PRP"), tok(1, "want", "want", "VBP"),
                   tok(2, "to", "to", "TO"), tok(3, "be", "be", "VB"),
                   tok(4, "a", "a", "DT"), tok(5, "hero", "hero", "NN"),
                   tok(6, ".", ".", ".")},
                  {{1, "nsubj", 0}, {1, "xcomp", 5}, {5, "mark", 2},
                   {5, "cop", 3}, {5, "det", 4}, {1, "punct", 6}})});
  v.push_back({"s-v-be-a", "I want to be slim.",
               ps("s-v-be-a",
                  {tok(0, "I", "i", "PRP"), tok(1, "want", "want", "VBP"),
                   tok(2, "to", "to", "TO"), tok(3, "be", "be", "VB"),
                   tok(4, "slim", "slim", "JJ"), tok(5, ".", ".", ".")},
                  {{1, "nsubj", 0}, {1, "xcomp", 4}, {4, "mark", 2},
                   {4, "cop", 3}, {1, "punct", 5}})});
  v.push_back({"s-v-o-be-o", "I want her to be hero.",
               ps("s-v-o-be-o",
                  {tok(0, "I", "i", "PRP"), tok(1, "want", "want", "VBP"),
                   tok(2, "her", "her", "PRP"), tok(3, "to", "to", "TO"),
                   tok(4, "be", "be", "VB"), tok(5, "hero", "hero", "NN"),
                   tok(6, ".", ".", ".")},
                  {{1, "nsubj", 0}, {1, "iobj", 2}, {1, "xcomp", 5},
                   {5, "mark", 3}, {5, "cop", 4}, {1, "punct", 6}})});
  v.push_back({"s-v-o-be-a", "I want her to be happy.",
               ps("s-v-o-be-a",
                  {tok(0, "I", "i", "PRP"), tok(1, "want", "want", "VBP"),
                   tok(2, "her", "her", "PRP"), tok(3, "to", "to", "TO"),
                   tok(4, "be", "be", "VB"), tok(5, "happy", "happy", "JJ"),
                   tok(6, ".", ".", ".")},
                  {{1, "nsubj", 0}, {1, "iobj", 2}, {1, "xcomp", 5},
                   {5, "mark", 3}, {5, "cop", 4}, {1, "punct", 6}})});
  v.push_back({"there-be-o", "There is an apple.",
               ps("there-be-o",
                  {tok(0, "There", "there", "EX"), tok(1, "is", "be", "VBZ"),
                   tok(2, "an", "an", "DT"), tok(3, "apple", "apple", "NN"),
                   tok(4, ".", ".", ".")},
                  {{1, "expl", 0}, {1, "nsubj", 3}, {3, "det", 2},
                   {1, "punct", 4}})});
  v.push_back({"spass-v", "The bill is paid.",
               ps("spass-v",
                  {tok(0, "The", "the", "DT"), tok(1, "bill", "bill", "NN"),
                   tok(2, "is", "be", "VBZ"), tok(3, "paid", "pay", "VBN"),
                   tok(4, ".", ".", ".")},
                  {{3, "nsubjpass", 1}, {1, "det", 0}, {3, "aux", 2},
                   {3, "punct", 4}})});
  v.push_back({"spass-v-o", "He is served water.",
               ps("spass-v-o",
                  {tok(0, "He", "he", "PRP"), tok(1, "is", "be", "VBZ"),
                   tok(2, "served", "serve", "VBN"),
                   tok(3, "water", "water", "NN"), tok(4, ".", ".", ".")},
                  {{2, "nsubjpass", 0}, {2, "aux", 1}, {2, "dobj", 3},
                   {2, "punct", 4}})});
  v.push_back({"spass-v-v-o", "He is asked to help us.",
               ps("spass-v-v-o",
                  {tok(0, "He", "he", "PRP"), tok(1, "is", "be", "VBZ"),
                   tok(2, "asked", "ask", "VBN"), tok(3, "to", "to", "TO"),
                   tok(4, "help", "help", "VB"), tok(5, "us", "us", "PRP"),
                   tok(6, ".", ".", ".")},
                  {{2, "nsubjpass", 0}, {2, "aux", 1}, {2, "xcomp", 4},
                   {4, "mark", 3}, {4, "dobj", 5}, {2, "punct", 6}})});
  return v;
}

}  // namespace

const std::vector<PatternCase>& pattern_cases() {
  static const std::vector<PatternCase> cases = build_pattern_cases();
  return cases;
}

ParsedSentence have_book() {
  return sent("neg", 0, 0,
              {tok(0, "I", "i", "PRP"), tok(1, "have", "have", "VBP"),
               tok(2, "a", "a", "DT"), tok(3, "book", "book", "NN"),
               tok(4, ".", ".", ".")},
              {{1, "nsubj", 0}, {1, "dobj", 3}, {3, "det", 2}, {1, "punct", 4}});
}

std::vector<ParsedSentence> demo_two_sentences() {
  ParsedSentence s0 =
      sent("demo", 0, 0,
           {tok(0, "My", "my", "PRP$"), tok(1, "army", "army", "NN"),
            tok(2, "will", "will", "MD"), tok(3, "find", "find", "VB"),
            tok(4, "your", "your", "PRP$"), tok(5, "boat", "boat", "NN"),
            tok(6, ".", ".", ".")},
           {{3, "nsubj", 1}, {1, "poss", 0}, {3, "aux", 2}, {3, "dobj", 5},
            {5, "poss", 4}, {3, "punct", 6}});
  ParsedSentence s1 =
      sent("demo", 0, 1,
           {tok(0, "In", "in", "IN"), tok(1, "the", "the", "DT"),
            tok(2, "meantime", "meantime", "NN"), tok(3, ",", ",", ","),
            tok(4, "I", "i", "PRP"), tok(5, "'m", "be", "VBP"),
            tok(6, "sure", "sure", "JJ"), tok(7, "we", "we", "PRP"),
            tok(8, "could", "could", "MD"), tok(9, "find", "find", "VB"),
            tok(10, "you", "you", "PRP"),
            tok(11, "suitable", "suitable", "JJ"),
            tok(12, "accommodations", "accommodation", "NNS"),
            tok(13, ".", ".", ".")},
           {{6, "nsubj", 4}, {6, "cop", 5}, {2, "case", 0}, {2, "det", 1},
            {6, "nmod", 2}, {6, "punct", 3}, {6, "ccomp", 9}, {9, "nsubj", 7},
            {9, "aux", 8}, {9, "iobj", 10}, {12, "amod", 11}, {9, "dobj", 12},
            {6, "punct", 13}});
  return {s0, s1};
}

std::string demo_isa_tsv() {
  return "army\tInstitution\t0.058\n"
         "army\tOrganization\t0.038\n"
         "accommodation\tService\t0.056\n"
         "accommodation\tFacility\t0.019\n";
}

IsATable demo_isa() {
  return IsATable::from_rows({{"army", "Institution", 0.058},
                              {"army", "Organization", 0.038},
                              {"accommodation", "Service", 0.056},
                              {"accommodation", "Facility", 0.019}});
}

const char* kCidHungry = "3c88a3208d024391862ac2d3074be535";
const char* kCidMeat = "5fcb4d6ff24c1db565ea8b3543253303";

void seed_restaurant(KgStore& store) {
  auto hungry = [](const std::string& subj, double w) {
    return make_ev("s-be-a",
                   {tok(0, subj, subj, "PRP"), tok(1, "be", "be", "VBP"),
                    tok(2, "hungry", "hungry", "JJ")},
                   {0, 1, 2}, {{2, "nsubj", 0}, {2, "cop", 1}}, w);
  };
  Eventuality e_hungry = hungry("i", 1000);
  Eventuality e_they = hungry("they", 384);
  Eventuality e_too =
      make_ev("s-be-a",
              {tok(0, "i", "i", "PRP"), tok(1, "be", "be", "VBP"),
               tok(2, "too", "too", "RB"), tok(3, "hungry", "hungry", "JJ")},
              {0, 1, 3}, {{3, "nsubj", 0}, {3, "cop", 1}, {3, "advmod", 2}}, 5);
  Eventuality e_chicken =
      make_ev("s-v-o",
              {tok(0, "i", "i", "PRP"), tok(1, "order", "order", "VBP"),
               tok(2, "chicken", "chicken", "NN")},
              {0, 1, 2}, {{1, "nsubj", 0}, {1, "dobj", 2}}, 5);
  Eventuality e_orange =
      make_ev("s-v-o",
              {tok(0, "i", "i", "PRP"), tok(1, "order", "order", "VBP"),
               tok(2, "orange", "orange", "NN"),
               tok(3, "chicken", "chicken", "NN")},
              {0, 1, 3},
              {{1, "nsubj", 0}, {1, "dobj", 3}, {3, "compound", 2}}, 20);
  Eventuality e_fried =
      make_ev("s-v-o",
              {tok(0, "i", "i", "PRP"), tok(1, "order", "order", "VBP"),
               tok(2, "fried", "fried", "JJ"),
               tok(3, "chicken", "chicken", "NN")},
              {0, 1, 3}, {{1, "nsubj", 0}, {1, "dobj", 3}, {3, "amod", 2}},
              20);
  Eventuality e_rib =
      make_ev("s-v-o",
              {tok(0, "i", "i", "PRP"), tok(1, "order", "order", "VBP"),
               tok(2, "pork", "pork", "NN"), tok(3, "rib", "rib", "NN")},
              {0, 1, 3},
              {{1, "nsubj", 0}, {1, "dobj", 3}, {3, "compound", 2}}, 205);

  for (const Eventuality* e :
       {&e_hungry, &e_they, &e_too, &e_chicken, &e_orange, &e_fried, &e_rib})
    store.upsert_eventuality(*e);
  store.upsert_relation_weight(e_hungry.eid, NodeKind::Event, e_orange.eid,
                               NodeKind::Event, RelType::Result, 0.125);
  store.upsert_relation_weight(e_too.eid, NodeKind::Event, e_fried.eid,
                               NodeKind::Event, RelType::Result, 1.0);
}

std::string restaurant_isa_tsv() {
  return "chicken\tMeat\t0.069\npork rib\tMeat\t0.120\n";
}

IsATable restaurant_isa() {
  return IsATable::from_rows(
      {{"chicken", "Meat", 0.069}, {"pork rib", "Meat", 0.120}});
}

std::string sent_jsonl(const ParsedSentence& s) {
  nlohmann::ordered_json j;
  j["doc"] = s.doc_id;
  j["para"] = s.para_id;
  j["sent"] = s.sent_id;
  auto toks = nlohmann::ordered_json::array();
  for (const Token& t : s.tokens) {
    // The reader maps tags to coarse classes; emit one tag per class.
    const char* tag = "XX";
    switch (t.pos) {
      case Pos::Noun: tag = "NN"; break;
      case Pos::Verb: tag = "VB"; break;
      case Pos::BeVerb: tag = "VBZ"; break;
      case Pos::Adjective: tag = "JJ"; break;
      case Pos::Preposition: tag = "IN"; break;
      case Pos::Pronoun: tag = "PRP"; break;
      case Pos::Other: tag = "XX"; break;
    }
    toks.push_back({{"i", t.index}, {"w", t.surface}, {"l", t.lemma},
                    {"p", tag}, {"n", t.ner}});
  }
  j["tokens"] = std::move(toks);
  auto deps = nlohmann::ordered_json::array();
  for (const DepEdge& e : s.deps)
    deps.push_back({e.gov, e.label, e.dep});
  j["deps"] = std::move(deps);
  return j.dump();
}

void write_corpus(const std::string& path,
                  const std::vector<ParsedSentence>& sents) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  for (const ParsedSentence& s : sents) os << sent_jsonl(s) << "\n";
}

std::vector<ParsedSentence> synthetic_corpus(size_t n, uint64_t seed) {
  DetRng rng(mix_seed(seed, 0xc0de));
  const std::vector<std::string> subjects = {"i",   "you", "he",  "she",
                                             "we",  "they", "dog", "man",
                                             "mary", "woman"};
  const std::vector<std::string> verbs = {"eat",  "drink", "read", "drive",
                                          "see",  "like",  "find", "make",
                                          "take", "buy"};
  const std::vector<std::string> objects = {"food",  "water", "book", "car",
                                            "apple", "house", "meat", "tea",
                                            "bread", "fish"};
  const std::vector<std::string> adjs = {"happy", "hungry", "tired",
                                         "sick",  "busy",   "ready"};
  const std::vector<std::string> medial = {"because", "but", "and", "so"};

  auto subj_tok = [&](int i, const std::string& s) {
    bool pron = s == "i" || s == "you" || s == "he" || s == "she" ||
                s == "we" || s == "they";
    return tok(i, s, s, pron ? "PRP" : "NN", s == "mary" ? "Person" : "none");
  };

  std::vector<ParsedSentence> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    std::string doc = "doc" + std::to_string(i / 48);
    int para = (int)((i % 48) / 6);
    int sid = (int)(i % 6);
    const std::string& s1 = subjects[rng.below(subjects.size())];
    const std::string& v1 = verbs[rng.below(verbs.size())];
    const std::string& o1 = objects[rng.below(objects.size())];
    const std::string& a1 = adjs[rng.below(adjs.size())];

    switch (rng.below(7)) {
      case 0:  // s-v
        out.push_back(sent(doc, para, sid,
                           {subj_tok(0, s1), tok(1, v1, v1, "VBP"),
                            tok(2, ".", ".", ".")},
                           {{1, "nsubj", 0}, {1, "punct", 2}}));
        break;
      case 1:  // s-v-o
        out.push_back(sent(doc, para, sid,
                           {subj_tok(0, s1), tok(1, v1, v1, "VBP"),
                            tok(2, o1, o1, "NN"), tok(3, ".", ".", ".")},
                           {{1, "nsubj", 0}, {1, "dobj", 2}, {1, "punct", 3}}));
        break;
      case 2:  // s-be-a
        out.push_back(sent(doc, para, sid,
                           {subj_tok(0, s1), tok(1, "is", "be", "VBZ"),
                            tok(2, a1, a1, "JJ"), tok(3, ".", ".", ".")},
                           {{2, "nsubj", 0}, {2, "cop", 1}, {2, "punct", 3}}));
        break;
      case 3: {  // medial connective between two s-v-o clauses
        const std::string& c = medial[rng.below(medial.size())];
        const std::string& s2 = subjects[rng.below(subjects.size())];
        const std::string& v2 = verbs[rng.below(verbs.size())];
        const std::string& o2 = objects[rng.below(objects.size())];
        out.push_back(sent(
            doc, para, sid,
            {subj_tok(0, s1), tok(1, v1, v1, "VBP"), tok(2, o1, o1, "NN"),
             tok(3, c, c, "IN"), subj_tok(4, s2), tok(5, v2, v2, "VBP"),
             tok(6, o2, o2, "NN"), tok(7, ".", ".", ".")},
            {{1, "nsubj", 0}, {1, "dobj", 2}, {1, "advcl", 5}, {5, "mark", 3},
             {5, "nsubj", 4}, {5, "dobj", 6}, {1, "punct", 7}}));
        break;
      }
      case 4: {  // sentence-initial "because A, B"
        const std::string& s2 = subjects[rng.below(subjects.size())];
        const std::string& v2 = verbs[rng.below(verbs.size())];
        out.push_back(sent(
            doc, para, sid,
            {tok(0, "Because", "because", "IN"), subj_tok(1, s1),
             tok(2, v1, v1, "VBP"), tok(3, ",", ",", ","), subj_tok(4, s2),
             tok(5, v2, v2, "VBP"), tok(6, o1, o1, "NN"),
             tok(7, ".", ".", ".")},
            {{5, "advcl", 2}, {2, "mark", 0}, {2, "nsubj", 1}, {5, "punct", 3},
             {5, "nsubj", 4}, {5, "dobj", 6}, {5, "punct", 7}}));
        break;
      }
      case 5:  // sentence-initial "Then, A" (previous-sentence case)
        out.push_back(sent(
            doc, para, sid,
            {tok(0, "Then", "then", "RB"), tok(1, ",", ",", ","),
             subj_tok(2, s1), tok(3, v1, v1, "VBP"), tok(4, o1, o1, "NN"),
             tok(5, ".", ".", ".")},
            {{3, "advmod", 0}, {3, "punct", 1}, {3, "nsubj", 2},
             {3, "dobj", 4}, {3, "punct", 5}}));
        break;
      default:  // modifier-heavy object
        out.push_back(sent(
            doc, para, sid,
            {subj_tok(0, s1), tok(1, v1, v1, "VBP"), tok(2, "the", "the", "DT"),
             tok(3, a1, a1, "JJ"), tok(4, o1, o1, "NN"),
             tok(5, ".", ".", ".")},
            {{1, "nsubj", 0}, {1, "dobj", 4}, {4, "det", 2}, {4, "amod", 3},
             {1, "punct", 5}}));
        break;
    }
  }
  return out;
}

std::string temp_dir(const std::string& hint) {
  static std::atomic<unsigned> counter{0};
  fs::path base = fs::temp_directory_path() /
                  ("evkg-" + hint + "-" + std::to_string(::getpid()) + "-" +
                   std::to_string(counter.fetch_add(1)));
  fs::create_directories(base);
  return base.string();
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path);
  os << content;
}

}  // namespace evkg::test
