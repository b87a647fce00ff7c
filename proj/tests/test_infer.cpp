#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "evkg/error.hpp"
#include "evkg/ids.hpp"
#include "evkg/infer.hpp"
#include "evkg/rng.hpp"
#include "support.hpp"

using namespace evkg;
using namespace evkg::test;

namespace {

void add_event(KgStore& store, const std::string& eid) {
  EventualityRecord rec;
  rec.eid = eid;
  rec.pattern = "s-v";
  rec.frequency = 1.0;
  store.upsert_eventuality_record(rec);
}

void add_edge(KgStore& store, const std::string& h, const std::string& t,
              RelType type, double w) {
  store.upsert_relation_weight(h, NodeKind::Event, t, NodeKind::Event, type, w);
}

// a -Result-> b (3), a -Result-> c (1), a -Reason-> b (2),
// b -Result-> d (1), c -Result-> d (1), c -Result-> e (1)
KgStore diamond() {
  KgStore store;
  for (const char* id : {"a", "b", "c", "d", "e"}) add_event(store, id);
  add_edge(store, "a", "b", RelType::Result, 3.0);
  add_edge(store, "a", "c", RelType::Result, 1.0);
  add_edge(store, "a", "b", RelType::Reason, 2.0);
  add_edge(store, "b", "d", RelType::Result, 1.0);
  add_edge(store, "c", "d", RelType::Result, 1.0);
  add_edge(store, "c", "e", RelType::Result, 1.0);
  return store;
}

// Independent recomputation of the one-hop conditional from raw records,
// accumulating in ascending tail order exactly like the engine specifies.
std::vector<std::pair<std::string, double>> oracle_1hop(
    const KgStore& store, const std::string& head, RelType type,
    bool include_co) {
  std::vector<std::pair<std::string, double>> out;
  if (!include_co && type == RelType::CoOccurrence) return out;
  for (const auto& [rid, rec] : store.relations()) {
    if (rec.head_id != head) continue;
    if (rec.weight(type) > 0.0) out.push_back({rec.tail_id, rec.weight(type)});
  }
  std::sort(out.begin(), out.end());
  double sum = 0.0;
  for (const auto& [id, w] : out) sum += w;
  for (auto& [id, w] : out) w /= sum;
  return out;
}

std::map<std::string, double> oracle_2hop(const KgStore& store,
                                          const std::string& head, RelType t1,
                                          RelType t2, bool include_co) {
  std::map<std::string, double> acc;
  for (const auto& [mid, p1] : oracle_1hop(store, head, t1, include_co))
    for (const auto& [tail, p2] : oracle_1hop(store, mid, t2, include_co))
      acc[tail] += p1 * p2;
  return acc;
}

}  // namespace

TEST_CASE("one-hop tails normalize the chosen type's weights") {
  KgStore store = diamond();
  InferenceEngine eng(store);
  auto tails = eng.tails_1hop("a", RelType::Result);
  REQUIRE(tails.size() == 2);
  CHECK(tails[0].id == "b");
  CHECK(tails[0].prob == doctest::Approx(0.75));
  CHECK(tails[1].id == "c");
  CHECK(tails[1].prob == doctest::Approx(0.25));

  CHECK(eng.tails_1hop("a", RelType::Contrast).empty());
  CHECK(eng.tails_1hop("d", RelType::Result).empty());  // sink
  CHECK_THROWS_AS(eng.tails_1hop("nosuch", RelType::Result), NotFoundError);
}

TEST_CASE("two-hop tails sum leg products over middles") {
  KgStore store = diamond();
  InferenceEngine eng(store);
  auto tails = eng.tails_2hop("a", RelType::Result, RelType::Result);
  REQUIRE(tails.size() == 2);
  CHECK(tails[0].id == "d");
  CHECK(tails[0].prob == doctest::Approx(0.875));
  CHECK(tails[1].id == "e");
  CHECK(tails[1].prob == doctest::Approx(0.125));

  // witnesses list every path in ascending middle order
  REQUIRE(tails[0].witnesses.size() == 2);
  CHECK(tails[0].witnesses[0].middle_id == "b");
  CHECK(tails[0].witnesses[0].leg1 == doctest::Approx(0.75));
  CHECK(tails[0].witnesses[0].leg2 == doctest::Approx(1.0));
  CHECK(tails[0].witnesses[1].middle_id == "c");
  CHECK(tails[0].witnesses[1].leg2 == doctest::Approx(0.5));
  REQUIRE(tails[1].witnesses.size() == 1);
  CHECK(tails[1].witnesses[0].middle_id == "c");

  CHECK(eng.tails_2hop("a", RelType::Reason, RelType::Result).size() == 1);
  CHECK(eng.tails_2hop("a", RelType::Contrast, RelType::Result).empty());
}

TEST_CASE("relation distribution over one pair") {
  KgStore store = diamond();
  InferenceEngine eng(store);
  auto rels = eng.relations_1hop("a", "b");
  REQUIRE(rels.size() == 2);
  CHECK(rels[0].type == RelType::Result);
  CHECK(rels[0].prob == doctest::Approx(0.6));
  CHECK(rels[1].type == RelType::Reason);
  CHECK(rels[1].prob == doctest::Approx(0.4));

  CHECK(eng.relations_1hop("a", "d").empty());  // no direct record
  CHECK_THROWS_AS(eng.relations_1hop("a", "nosuch"), NotFoundError);
  CHECK_THROWS_AS(eng.relations_1hop("nosuch", "a"), NotFoundError);
}

TEST_CASE("type prior marginalizes over every outgoing record") {
  KgStore store = diamond();
  InferenceEngine eng(store);
  auto prior = eng.type_prior("a");
  REQUIRE(prior.size() == 2);
  CHECK(prior[0].type == RelType::Result);
  CHECK(prior[0].prob == doctest::Approx(4.0 / 6.0));
  CHECK(prior[1].type == RelType::Reason);
  CHECK(prior[1].prob == doctest::Approx(2.0 / 6.0));
  CHECK(eng.type_prior("d").empty());
}

TEST_CASE("two-hop relation pairs weight the prior by path mass") {
  KgStore store = diamond();
  InferenceEngine eng(store);
  auto pairs = eng.relations_2hop("a", "d");
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].first == RelType::Result);
  CHECK(pairs[0].second == RelType::Result);
  CHECK(pairs[0].prob == doctest::Approx(2.0 / 3.0));
  CHECK(pairs[1].first == RelType::Reason);
  CHECK(pairs[1].second == RelType::Result);
  CHECK(pairs[1].prob == doctest::Approx(1.0 / 3.0));

  CHECK(eng.relations_2hop("d", "a").empty());
}

TEST_CASE("co-occurrence edges can be excluded") {
  KgStore store = diamond();
  add_event(store, "f");
  add_edge(store, "a", "f", RelType::CoOccurrence, 10.0);

  InferenceEngine with(store, {GraphLayer::Event, true});
  auto tails = with.tails_1hop("a", RelType::CoOccurrence);
  REQUIRE(tails.size() == 1);
  CHECK(tails[0].id == "f");
  auto prior = with.type_prior("a");
  CHECK(prior[0].type == RelType::CoOccurrence);
  CHECK(prior[0].prob == doctest::Approx(10.0 / 16.0));

  InferenceEngine without(store, {GraphLayer::Event, false});
  CHECK(without.tails_1hop("a", RelType::CoOccurrence).empty());
  auto prior2 = without.type_prior("a");
  REQUIRE(prior2.size() == 2);
  CHECK(prior2[0].prob == doctest::Approx(4.0 / 6.0));

  // pair distributions renormalize over the remaining types
  add_edge(store, "a", "f", RelType::Result, 10.0);
  InferenceEngine without2(store, {GraphLayer::Event, false});
  auto rels = without2.relations_1hop("a", "f");
  REQUIRE(rels.size() == 1);
  CHECK(rels[0].type == RelType::Result);
  CHECK(rels[0].prob == doctest::Approx(1.0));
}

TEST_CASE("layers expose only their own edges") {
  KgStore store;
  add_event(store, "x1");
  add_event(store, "x2");
  ConceptRecord k1, k2;
  k1.cid = "k1";
  k1.words = {"K1"};
  k2.cid = "k2";
  k2.words = {"K2"};
  store.upsert_concept_record(k1);
  store.upsert_concept_record(k2);

  add_edge(store, "x1", "x2", RelType::Result, 1.0);
  store.upsert_relation_weight("k1", NodeKind::Concept, "k2",
                               NodeKind::Concept, RelType::Result, 1.0);
  store.upsert_relation_weight("x1", NodeKind::Event, "k2", NodeKind::Concept,
                               RelType::Result, 1.0);

  InferenceEngine ev(store, {GraphLayer::Event, true});
  auto evTails = ev.tails_1hop("x1", RelType::Result);
  REQUIRE(evTails.size() == 1);
  CHECK(evTails[0].id == "x2");
  CHECK(ev.tails_1hop("k1", RelType::Result).empty());

  InferenceEngine co(store, {GraphLayer::Concept, true});
  auto coTails = co.tails_1hop("k1", RelType::Result);
  REQUIRE(coTails.size() == 1);
  CHECK(coTails[0].id == "k2");
  CHECK(co.tails_1hop("x1", RelType::Result).empty());

  InferenceEngine hy(store, {GraphLayer::Hybrid, true});
  CHECK(hy.tails_1hop("x1", RelType::Result).size() == 2);
  CHECK(hy.tails_1hop("k1", RelType::Result).size() == 1);
}

TEST_CASE("random graphs: distributions sum to one, two-hop matches oracle") {
  DetRng rng(mix_seed(7, 0x1f3));
  const RelType types[] = {RelType::Result, RelType::Reason,
                           RelType::CoOccurrence};
  for (int iter = 0; iter < 50; ++iter) {
    KgStore store;
    size_t n = 4 + rng.below(9);
    std::vector<std::string> ids;
    for (size_t i = 0; i < n; ++i) {
      ids.push_back("n" + std::to_string(100 + i));
      add_event(store, ids.back());
    }
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        for (RelType t : types) {
          if (rng.uniform() < 0.25)
            add_edge(store, ids[i], ids[j], t, 0.1 + rng.uniform() * 5.0);
        }
      }
    }
    bool include_co = rng.below(2) == 0;
    InferenceEngine eng(store, {GraphLayer::Event, include_co});

    for (const std::string& h : ids) {
      for (RelType t : types) {
        auto got = eng.tails_1hop(h, t);
        auto want = oracle_1hop(store, h, t, include_co);
        REQUIRE(got.size() == want.size());
        double sum = 0.0;
        for (const auto& st : got) sum += st.prob;
        if (!got.empty()) CHECK(std::abs(sum - 1.0) <= 1e-9);
        std::map<std::string, double> wantMap(want.begin(), want.end());
        for (const auto& st : got) CHECK(st.prob == wantMap.at(st.id));
      }
      auto got2 = eng.tails_2hop(h, types[0], types[1]);
      auto want2 = oracle_2hop(store, h, types[0], types[1], include_co);
      REQUIRE(got2.size() == want2.size());
      for (const auto& st : got2) {
        CAPTURE(st.id);
        CHECK(st.prob == want2.at(st.id));  // bit-exact by fixed order
      }
      auto prior = eng.type_prior(h);
      double psum = 0.0;
      for (const auto& r : prior) psum += r.prob;
      if (!prior.empty()) CHECK(std::abs(psum - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("layer names round-trip") {
  CHECK(layer_name(GraphLayer::Event) == std::string("event"));
  CHECK(layer_name(GraphLayer::Concept) == std::string("concept"));
  CHECK(layer_name(GraphLayer::Hybrid) == std::string("hybrid"));
  CHECK(layer_from_name("event") == GraphLayer::Event);
  CHECK(layer_from_name("concept") == GraphLayer::Concept);
  CHECK(layer_from_name("hybrid") == GraphLayer::Hybrid);
  CHECK_FALSE(layer_from_name("both").has_value());
}
