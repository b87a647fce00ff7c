#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>

#include "evkg/clauses.hpp"
#include "evkg/conceptualize.hpp"
#include "evkg/discourse.hpp"
#include "evkg/error.hpp"
#include "evkg/ids.hpp"
#include "evkg/patterns.hpp"
#include "support.hpp"

using namespace evkg;
using namespace evkg::test;

namespace {

// Hand-built aggregated record; deps only matter for compound phrases.
EventualityRecord rec_of(std::vector<std::string> words,
                         std::vector<std::string> pos,
                         std::vector<int> skel,
                         std::vector<std::array<std::string, 3>> deps = {},
                         std::vector<std::string> ner = {}) {
  EventualityRecord rec;
  rec.words = std::move(words);
  rec.pos = std::move(pos);
  rec.skel = std::move(skel);
  rec.deps = std::move(deps);
  rec.ner = ner.empty() ? std::vector<std::string>(rec.words.size(), "none")
                        : std::move(ner);
  rec.pattern = "s-v";
  rec.eid = digest128("fixture:" + rec.words[0]);
  rec.frequency = 1.0;
  return rec;
}

std::vector<std::string> words_of(const std::vector<ConceptOption>& opts,
                                  size_t i) {
  REQUIRE(i < opts.size());
  return opts[i].words;
}

}  // namespace

TEST_CASE("probability table keeps ranked entries per term") {
  IsATable t = IsATable::from_rows(
      {{"dog", "Animal", 0.6}, {"dog", "Pet", 0.3}, {"cat", "Animal", 0.9}});
  const auto* dog = t.lookup("dog");
  REQUIRE(dog != nullptr);
  REQUIRE(dog->size() == 2);
  CHECK((*dog)[0].concept_word == "Animal");
  CHECK((*dog)[0].prob == 0.6);
  CHECK((*dog)[1].concept_word == "Pet");
  CHECK(t.lookup("DOG") == dog);  // term matching is case-insensitive
  CHECK(t.lookup("fox") == nullptr);
  CHECK(t.size() == 2);
}

TEST_CASE("count tables normalize per child before ranking") {
  // one value above 1 flips the whole input to count mode
  IsATable t = IsATable::from_rows(
      {{"dog", "Animal", 60}, {"dog", "Pet", 40}, {"cat", "Animal", 1}});
  const auto* dog = t.lookup("dog");
  REQUIRE(dog != nullptr);
  CHECK((*dog)[0].prob == doctest::Approx(0.6));
  CHECK((*dog)[1].prob == doctest::Approx(0.4));
  const auto* cat = t.lookup("cat");
  REQUIRE(cat != nullptr);
  CHECK((*cat)[0].prob == doctest::Approx(1.0));
}

TEST_CASE("table truncates to top-k with deterministic tie order") {
  std::vector<std::tuple<std::string, std::string, double>> rows;
  for (char c = 'a'; c <= 'f'; ++c)
    rows.push_back({"x", std::string(1, c), 0.1});
  IsATable t = IsATable::from_rows(rows, 5);
  const auto* x = t.lookup("x");
  REQUIRE(x != nullptr);
  REQUIRE(x->size() == 5);
  for (size_t i = 0; i < 5; ++i)  // ties resolved alphabetically
    CHECK((*x)[i].concept_word == std::string(1, (char)('a' + i)));
}

TEST_CASE("tsv loader reports malformed lines") {
  std::string dir = temp_dir("isa");
  std::string path = dir + "/isa.tsv";

  write_file(path, "dog\tAnimal\t0.6\ncat\tAnimal\n");
  try {
    IsATable::load_tsv(path);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }

  write_file(path, "dog\tAnimal\t-1\n");
  CHECK_THROWS_AS(IsATable::load_tsv(path), ParseError);
  write_file(path, "dog\tAnimal\tnotanumber\n");
  CHECK_THROWS_AS(IsATable::load_tsv(path), ParseError);
  CHECK_THROWS_AS(IsATable::load_tsv(dir + "/missing.tsv"), Error);

  write_file(path, restaurant_isa_tsv());
  IsATable t = IsATable::load_tsv(path);
  REQUIRE(t.lookup("pork rib") != nullptr);
  CHECK((*t.lookup("pork rib"))[0].prob == doctest::Approx(0.120));
  std::filesystem::remove_all(dir);
}

TEST_CASE("context-free token rule") {
  Conceptualizer cz(demo_isa());

  // only nominal tokens conceptualize
  CHECK(cz.conceptualize_token(tok(0, "runs", "run", "VBZ")).empty());
  CHECK(cz.conceptualize_token(tok(0, "red", "red", "JJ")).empty());

  // a named entity maps straight to its label
  auto ner = cz.conceptualize_token(tok(0, "Mary", "mary", "NNP", "Person"));
  REQUIRE(ner.size() == 1);
  CHECK(ner[0].concept_word == "Person");
  CHECK(ner[0].prob == 1.0);

  // personal pronouns become the first placeholder, "it" stays out
  auto she = cz.conceptualize_token(tok(0, "she", "she", "PRP"));
  REQUIRE(she.size() == 1);
  CHECK(she[0].concept_word == "PersonX");
  CHECK(cz.conceptualize_token(tok(0, "it", "it", "PRP")).empty());

  // nouns go through the table; unknown nouns yield nothing here
  auto army = cz.conceptualize_token(tok(0, "army", "army", "NN"));
  REQUIRE(army.size() == 2);
  CHECK(army[0].concept_word == "Institution");
  CHECK(army[0].prob == doctest::Approx(0.058));
  CHECK(cz.conceptualize_token(tok(0, "boat", "boat", "NN")).empty());

  CHECK(is_person_pronoun("they"));
  CHECK(is_person_pronoun("Me"));
  CHECK_FALSE(is_person_pronoun("it"));
  CHECK_FALSE(is_person_pronoun("its"));
  CHECK_FALSE(is_person_pronoun("itself"));
}

TEST_CASE("record conceptualization covers the skeleton only") {
  Conceptualizer cz(demo_isa(), {1.0, 100, 0.0});
  // "army will find boat": "will" is a word but not a skeleton token
  EventualityRecord rec =
      rec_of({"army", "will", "find", "boat"}, {"n", "x", "v", "n"},
             {0, 2, 3});
  auto opts = cz.conceptualize_record(rec);
  REQUIRE(opts.size() == 2);
  CHECK(words_of(opts, 0) ==
        std::vector<std::string>{"Institution", "find", "boat"});
  CHECK(opts[0].prob == doctest::Approx(0.058));
  CHECK(words_of(opts, 1) ==
        std::vector<std::string>{"Organization", "find", "boat"});
  CHECK(opts[1].prob == doctest::Approx(0.038));
}

TEST_CASE("person placeholders are assigned per eventuality in order") {
  Conceptualizer cz(demo_isa());
  EventualityRecord rec =
      rec_of({"he", "give", "she", "they", "us"}, {"pr", "v", "pr", "pr", "pr"},
             {0, 1, 2, 3, 4});
  auto opts = cz.conceptualize_record(rec);
  REQUIRE(opts.size() == 1);
  CHECK(words_of(opts, 0) == std::vector<std::string>{"PersonX", "give",
                                                      "PersonY", "PersonZ",
                                                      "Person4"});

  // repeated pronouns share one placeholder; "it" stays verbatim
  EventualityRecord twice =
      rec_of({"he", "see", "he", "it"}, {"pr", "v", "pr", "pr"}, {0, 1, 2, 3});
  auto opts2 = cz.conceptualize_record(twice);
  REQUIRE(opts2.size() == 1);
  CHECK(words_of(opts2, 0) ==
        std::vector<std::string>{"PersonX", "see", "PersonX", "it"});

  // NER beats the pronoun and the noun table alike
  EventualityRecord named =
      rec_of({"army", "win"}, {"n", "v"}, {0, 1}, {}, {"Country", "none"});
  auto opts3 = cz.conceptualize_record(named);
  REQUIRE(opts3.size() == 1);
  CHECK(words_of(opts3, 0) == std::vector<std::string>{"Country", "win"});
  CHECK(opts3[0].prob == 1.0);
}

TEST_CASE("compound phrases are tried before the bare head noun") {
  Conceptualizer cz(restaurant_isa());

  EventualityRecord rib =
      rec_of({"i", "order", "pork", "rib"}, {"pr", "v", "n", "n"}, {0, 1, 3},
             {{"rib", "compound", "pork"}});
  auto opts = cz.conceptualize_record(rib);
  REQUIRE(opts.size() == 1);
  CHECK(words_of(opts, 0) == std::vector<std::string>{"PersonX", "order",
                                                      "Meat"});
  CHECK(opts[0].prob == doctest::Approx(0.120));  // the "pork rib" entry

  // an unknown phrase falls back to the head noun's entries
  EventualityRecord orange =
      rec_of({"i", "order", "orange", "chicken"}, {"pr", "v", "n", "n"},
             {0, 1, 3}, {{"chicken", "compound", "orange"}});
  auto opts2 = cz.conceptualize_record(orange);
  REQUIRE(opts2.size() == 1);
  CHECK(opts2[0].prob == doctest::Approx(0.069));  // bare "chicken"

  // adjective modifiers are not compounds and never form a phrase
  EventualityRecord fried =
      rec_of({"i", "order", "fried", "chicken"}, {"pr", "v", "a", "n"},
             {0, 1, 3}, {{"chicken", "amod", "fried"}});
  CHECK(cz.conceptualize_record(fried)[0].prob == doctest::Approx(0.069));

  // multi-token compounds assemble in word order
  Conceptualizer cz2(IsATable::from_rows({{"hot orange chicken", "Dish", 0.4}}));
  EventualityRecord hot =
      rec_of({"i", "order", "hot", "orange", "chicken"},
             {"pr", "v", "n", "n", "n"}, {0, 1, 4},
             {{"chicken", "compound", "hot"}, {"chicken", "compound", "orange"}});
  auto opts3 = cz2.conceptualize_record(hot);
  REQUIRE(opts3.size() == 1);
  CHECK(words_of(opts3, 0) == std::vector<std::string>{"PersonX", "order",
                                                       "Dish"});
}

TEST_CASE("duplicate table rows merge by summing probabilities") {
  IsATable t = IsATable::from_rows({{"x", "A", 0.3}, {"x", "A", 0.2}});
  Conceptualizer cz(t);
  EventualityRecord rec = rec_of({"x", "run"}, {"n", "v"}, {0, 1});
  auto opts = cz.conceptualize_record(rec);
  REQUIRE(opts.size() == 1);
  CHECK(words_of(opts, 0) == std::vector<std::string>{"A", "run"});
  CHECK(opts[0].prob == doctest::Approx(0.5));
}

TEST_CASE("beam and probability floor prune the candidate list") {
  IsATable t = IsATable::from_rows(
      {{"x", "A", 0.5}, {"x", "B", 0.3}, {"x", "C", 0.2}});
  EventualityRecord rec = rec_of({"x", "run"}, {"n", "v"}, {0, 1});

  Conceptualizer beam2(t, {5.0, 2, 0.0});
  auto opts = beam2.conceptualize_record(rec);
  REQUIRE(opts.size() == 2);
  CHECK(words_of(opts, 0) == std::vector<std::string>{"A", "run"});
  CHECK(words_of(opts, 1) == std::vector<std::string>{"B", "run"});

  // the floor is inclusive: candidates at exactly the threshold survive
  Conceptualizer floor(t, {5.0, 100, 0.2});
  CHECK(floor.conceptualize_record(rec).size() == 3);
  Conceptualizer floor2(t, {5.0, 100, 0.21});
  CHECK(floor2.conceptualize_record(rec).size() == 2);
}

TEST_CASE("full pass reproduces the worked weighting example") {
  KgStore store;
  seed_restaurant(store);
  Conceptualizer cz(restaurant_isa(), {5.0, 100, 0.0});
  ConceptualizeSummary sum = cz.run(store);

  CHECK(sum.eventualities == 7);
  CHECK(sum.concepts == 2);
  CHECK(sum.concept_event_edges == 4);
  CHECK(sum.concept_concept_edges == 1);

  const ConceptRecord& hungry = store.concept_row(kCidHungry);
  CHECK(hungry.words ==
        std::vector<std::string>{"PersonX", "be", "hungry"});
  CHECK(hungry.instances.size() == 3);
  CHECK(hungry.weight == doctest::Approx(1389.0).epsilon(1e-12));

  const ConceptRecord& meat = store.concept_row(kCidMeat);
  CHECK(meat.words == std::vector<std::string>{"PersonX", "order", "Meat"});
  CHECK(meat.instances.size() == 4);
  CHECK(meat.weight == doctest::Approx(27.705).epsilon(1e-10));

  // stored weights agree with the recomputation helper
  CHECK(concept_weight(hungry, store) == doctest::Approx(hungry.weight));
  CHECK(concept_weight(meat, store) == doctest::Approx(meat.weight));
}

TEST_CASE("full pass projects relations onto concept endpoints") {
  KgStore store;
  seed_restaurant(store);
  Conceptualizer cz(restaurant_isa(), {5.0, 100, 0.0});
  cz.run(store);

  std::string e_orange, e_fried, e_hungry, e_too;
  for (const auto& [eid, rec] : store.eventualities()) {
    if (rec.words == std::vector<std::string>{"i", "order", "orange",
                                              "chicken"})
      e_orange = eid;
    if (rec.words == std::vector<std::string>{"i", "order", "fried",
                                              "chicken"})
      e_fried = eid;
    if (rec.words == std::vector<std::string>{"i", "be", "hungry"})
      e_hungry = eid;
    if (rec.words == std::vector<std::string>{"i", "be", "too", "hungry"})
      e_too = eid;
  }
  REQUIRE_FALSE(e_orange.empty());
  REQUIRE_FALSE(e_fried.empty());

  // concept -> event, probability of the head concept times relation weight
  const RelationRecord* ce = store.find_relation(rid_of(kCidHungry, e_orange));
  REQUIRE(ce != nullptr);
  CHECK(ce->head_kind == NodeKind::Concept);
  CHECK(ce->tail_kind == NodeKind::Event);
  CHECK(ce->weight(RelType::Result) == doctest::Approx(0.125));
  const RelationRecord* ce2 = store.find_relation(rid_of(kCidHungry, e_fried));
  REQUIRE(ce2 != nullptr);
  CHECK(ce2->weight(RelType::Result) == doctest::Approx(1.0));

  // event -> concept, tail concept probability times relation weight
  const RelationRecord* ec = store.find_relation(rid_of(e_hungry, kCidMeat));
  REQUIRE(ec != nullptr);
  CHECK(ec->head_kind == NodeKind::Event);
  CHECK(ec->tail_kind == NodeKind::Concept);
  CHECK(ec->weight(RelType::Result) == doctest::Approx(0.125 * 0.069));
  const RelationRecord* ec2 = store.find_relation(rid_of(e_too, kCidMeat));
  REQUIRE(ec2 != nullptr);
  CHECK(ec2->weight(RelType::Result) == doctest::Approx(0.069));

  // concept -> concept sums both projected relation instances
  const RelationRecord* cc = store.find_relation(rid_of(kCidHungry, kCidMeat));
  REQUIRE(cc != nullptr);
  CHECK(cc->head_kind == NodeKind::Concept);
  CHECK(cc->tail_kind == NodeKind::Concept);
  CHECK(cc->weight(RelType::Result) ==
        doctest::Approx(0.125 * 0.069 + 1.0 * 0.069).epsilon(1e-12));
}

TEST_CASE("frequency gate limits which eventualities conceptualize") {
  KgStore store;
  seed_restaurant(store);
  Conceptualizer cz(restaurant_isa(), {500.0, 100, 0.0});
  ConceptualizeSummary sum = cz.run(store);
  CHECK(sum.eventualities == 1);  // only the 1000-frequency row passes
  CHECK(store.concepts().size() == 1);
  CHECK(store.concept_row(kCidHungry).weight == doctest::Approx(1000.0));
}

TEST_CASE("demo pair end-to-end concept edges") {
  auto demo = demo_two_sentences();
  KgStore store;
  std::vector<std::vector<Eventuality>> evs;
  for (const ParsedSentence& s : demo) {
    auto clauses = split_clauses(s, ConnectiveLexicon::builtin());
    evs.push_back(extract_all(s, clauses, PatternTable::builtin()));
    store.upsert_eventualities(evs.back());
  }
  auto res = emit_relations(demo[1], evs[1], &demo[0], &evs[0],
                            ConnectiveLexicon::builtin());
  store.upsert_relations(res.instances);
  store.upsert_relations(emit_cooccurrence(demo[1], evs[1], res.linked));

  Conceptualizer cz(demo_isa(), {1.0, 100, 0.0});
  cz.run(store);

  std::string c_army = cid_of({"Institution", "find", "boat"});
  std::string c_service = cid_of({"PersonX", "find", "PersonY", "Service"});
  std::string c_sure = cid_of({"PersonX", "be", "sure"});

  const RelationRecord* sync = store.find_relation(rid_of(c_army, c_service));
  REQUIRE(sync != nullptr);
  CHECK(sync->weight(RelType::Synchronous) ==
        doctest::Approx(0.058 * 1.0 * 0.056).epsilon(1e-9));

  const RelationRecord* co = store.find_relation(rid_of(c_sure, c_service));
  REQUIRE(co != nullptr);
  CHECK(co->weight(RelType::CoOccurrence) == doctest::Approx(0.056));

  std::string c_fac = cid_of({"PersonX", "find", "PersonY", "Facility"});
  const RelationRecord* co2 = store.find_relation(rid_of(c_sure, c_fac));
  REQUIRE(co2 != nullptr);
  CHECK(co2->weight(RelType::CoOccurrence) == doctest::Approx(0.019));
}
