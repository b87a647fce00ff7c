#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "evkg/clauses.hpp"
#include "evkg/infer.hpp"
#include "evkg/metapath.hpp"
#include "evkg/patterns.hpp"
#include "evkg/pipeline.hpp"
#include "evkg/rng.hpp"
#include "evkg/rules.hpp"
#include "evkg/store.hpp"

using namespace evkg;

namespace {

Token tk(int i, std::string lemma, const char* tag) {
  Token t;
  t.index = i;
  t.surface = lemma;
  t.lemma = std::move(lemma);
  t.pos = pos_from_tag(tag, t.lemma);
  return t;
}

const char* kSubj[] = {"i", "you", "he", "she", "we", "they", "mary", "john"};
const char* kVerb[] = {"order", "eat", "find", "buy", "cook", "serve"};
const char* kObj[] = {"chicken", "rib", "soup", "salad", "bread", "coffee",
                      "cake", "tea"};

ParsedSentence svo(uint64_t n, const std::string& doc, int para, int sid) {
  ParsedSentence s;
  s.doc_id = doc;
  s.para_id = para;
  s.sent_id = sid;
  s.tokens = {tk(0, kSubj[n % 8], "PRP"), tk(1, kVerb[(n / 8) % 6], "VBP"),
              tk(2, kObj[(n / 48) % 8], "NN"), tk(3, ".", ".")};
  s.deps = {{1, "nsubj", 0}, {1, "dobj", 2}, {1, "punct", 3}};
  return s;
}

// "s1 v1 o1 because s2 v2 o2 ." : one medial connective, two clauses.
ParsedSentence chained(uint64_t n, const std::string& doc, int para, int sid) {
  ParsedSentence s;
  s.doc_id = doc;
  s.para_id = para;
  s.sent_id = sid;
  s.tokens = {tk(0, kSubj[n % 8], "PRP"),
              tk(1, kVerb[n % 6], "VBP"),
              tk(2, kObj[n % 8], "NN"),
              tk(3, "because", "IN"),
              tk(4, kSubj[(n + 3) % 8], "PRP"),
              tk(5, kVerb[(n + 2) % 6], "VBP"),
              tk(6, kObj[(n + 5) % 8], "NN"),
              tk(7, ".", ".")};
  s.deps = {{1, "nsubj", 0}, {1, "dobj", 2}, {1, "punct", 7},
            {1, "advcl", 5}, {5, "mark", 3}, {5, "nsubj", 4},
            {5, "dobj", 6}};
  return s;
}

std::vector<ParsedSentence> paragraph(uint64_t n, int sentences) {
  std::vector<ParsedSentence> out;
  for (int i = 0; i < sentences; ++i)
    out.push_back(i % 2 ? chained(n + i, "bench", 0, i)
                        : svo(n + i, "bench", 0, i));
  return out;
}

// A store with `events` s-v-o eventualities and `edges` random typed
// relations between them. Deterministic, so every run times the same graph.
KgStore random_store(size_t events, size_t edges, uint64_t seed) {
  const PatternTable& patterns = PatternTable::builtin();
  KgStore store;
  std::vector<std::string> eids;
  const ConnectiveLexicon& lexicon = ConnectiveLexicon::builtin();
  for (size_t i = 0; i < events; ++i) {
    ParsedSentence s = svo(i, "bench", 0, 0);
    std::vector<Eventuality> evs =
        extract_all(s, split_clauses(s, lexicon), patterns);
    for (Eventuality& ev : evs) {
      ev.weight = 1.0 + double(i % 7);
      store.upsert_eventuality(ev);
      eids.push_back(ev.eid);
    }
  }
  DetRng rng(mix_seed(seed, events, edges));
  const RelType types[] = {RelType::Precedence, RelType::Reason,
                           RelType::Result, RelType::Conjunction,
                           RelType::CoOccurrence};
  for (size_t i = 0; i < edges; ++i) {
    RelationInstance inst;
    inst.head_eid = eids[rng.below(eids.size())];
    inst.tail_eid = eids[rng.below(eids.size())];
    inst.type = types[rng.below(5)];
    inst.weight = 0.1 + rng.uniform() * 4.0;
    store.upsert_relation(inst);
  }
  return store;
}

void BM_ExtractSentence(benchmark::State& state) {
  const PatternTable& patterns = PatternTable::builtin();
  std::vector<ParsedSentence> pool;
  for (uint64_t n = 0; n < 64; ++n) pool.push_back(chained(n, "bench", 0, 0));
  const ConnectiveLexicon& lexicon = ConnectiveLexicon::builtin();
  size_t i = 0, found = 0;
  for (auto _ : state) {
    const ParsedSentence& s = pool[i++ % pool.size()];
    found += extract_all(s, split_clauses(s, lexicon), patterns).size();
  }
  benchmark::DoNotOptimize(found);
  state.SetItemsProcessed(int64_t(state.iterations()));
}
BENCHMARK(BM_ExtractSentence);

void BM_ProcessParagraph(benchmark::State& state) {
  const PatternTable& patterns = PatternTable::builtin();
  const ConnectiveLexicon& lexicon = ConnectiveLexicon::builtin();
  std::vector<std::vector<ParsedSentence>> pool;
  for (uint64_t n = 0; n < 16; ++n)
    pool.push_back(paragraph(n * 6, int(state.range(0))));
  size_t i = 0, rels = 0;
  for (auto _ : state) {
    ParagraphResult r =
        process_paragraph(pool[i++ % pool.size()], patterns, lexicon);
    rels += r.relations.size();
  }
  benchmark::DoNotOptimize(rels);
  state.SetItemsProcessed(int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_ProcessParagraph)->Arg(2)->Arg(6);

void BM_Tails1Hop(benchmark::State& state) {
  KgStore store = random_store(size_t(state.range(0)), size_t(state.range(0)) * 4, 17);
  InferenceEngine engine(store);
  std::vector<std::string> heads;
  for (const auto& [eid, rec] : store.eventualities()) heads.push_back(eid);
  size_t i = 0, tails = 0;
  for (auto _ : state)
    tails += engine.tails_1hop(heads[i++ % heads.size()], RelType::Result).size();
  benchmark::DoNotOptimize(tails);
  state.SetItemsProcessed(int64_t(state.iterations()));
}
BENCHMARK(BM_Tails1Hop)->Arg(64)->Arg(256);

void BM_MineRules(benchmark::State& state) {
  KgStore store = random_store(24, size_t(state.range(0)), 23);
  FactSet facts = expand_facts(store);
  size_t rules = 0;
  for (auto _ : state) rules += mine(facts).size();
  benchmark::DoNotOptimize(rules);
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(facts.facts.size()));
}
BENCHMARK(BM_MineRules)->Arg(60)->Arg(120);

void BM_RandomWalks(benchmark::State& state) {
  KgStore store = random_store(128, 512, 31);
  HybridGraph graph(store);
  WalkConfig wc;
  wc.num_seeds = size_t(state.range(0));
  wc.walks_per_seed = 10;
  wc.walk_length = 4;
  wc.rng_seed = 7;
  size_t paths = 0;
  for (auto _ : state) paths += mine_metapaths(graph, wc).paths;
  benchmark::DoNotOptimize(paths);
  state.SetItemsProcessed(int64_t(state.iterations()) *
                          int64_t(wc.num_seeds * wc.walks_per_seed));
}
BENCHMARK(BM_RandomWalks)->Arg(50)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
