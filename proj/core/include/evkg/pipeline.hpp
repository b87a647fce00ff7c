#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evkg/conceptualize.hpp"
#include "evkg/connectives.hpp"
#include "evkg/ingest.hpp"
#include "evkg/patterns.hpp"
#include "evkg/store.hpp"

namespace evkg {

// Every knob of a build/conceptualize run. Mirrored one-to-one by the config
// file (key = value lines) and by CLI flags; flags win because the CLI
// applies them after the file.
struct PipelineConfig {
  std::vector<std::string> inputs;
  std::string format = "parsed-jsonl";
  std::string store_path;    // sqlite output ("" = keep in memory)
  std::string export_dir;    // jsonl export ("" = skip)
  std::string lexicon_path;  // connective TSV ("" = builtin)
  std::string patterns_path; // pattern TSV ("" = builtin)
  std::string isa_path;      // IsA TSV, required for conceptualization
  bool core_filter = true;
  double min_event_freq = 2.0;
  double rel_weight_cutoff = 1.0;
  double concept_gate = 5.0;
  size_t beam = 100;
  double min_concept_prob = 0.0;
  double simpson_threshold = 0.8;
  int workers = 0;  // 0 = hardware concurrency
  uint64_t rng_seed = 0;
};

// Applies one key/value pair; throws UsageError on unknown keys or values
// that don't parse. "input" appends, everything else overwrites.
void set_config_value(PipelineConfig& cfg, const std::string& key,
                      const std::string& value);

// key = value file, # comments, optional quotes around values.
PipelineConfig load_config(const std::string& path);

const ConnectiveLexicon& pipeline_lexicon(const PipelineConfig& cfg,
                                          ConnectiveLexicon& storage);
const PatternTable& pipeline_patterns(const PipelineConfig& cfg,
                                      PatternTable& storage);

// Extraction output of one paragraph: the per-sentence eventualities plus
// discourse and co-occurrence instances. Pure function of the sentences, so
// paragraphs parallelize; the fold into the store stays in paragraph order
// either way, which is what makes worker counts invisible in the output.
struct ParagraphResult {
  std::vector<Eventuality> eventualities;
  std::vector<RelationInstance> relations;
};

ParagraphResult process_paragraph(const std::vector<ParsedSentence>& sents,
                                  const PatternTable& patterns,
                                  const ConnectiveLexicon& lexicon,
                                  double simpson_threshold = 0.8);

struct BuildReport {
  size_t documents = 0;
  size_t paragraphs = 0;
  size_t sentences = 0;
  size_t eventuality_instances = 0;
  size_t relation_instances = 0;
  StoreStats stats;  // of the final (possibly filtered) store
};

// ingest -> extract -> aggregate -> optional core filter. The store is
// replaced, not appended to.
BuildReport build_store(const PipelineConfig& cfg, KgStore& store);

// Applies the frequency gate and writes concepts + projected edges.
ConceptualizeSummary conceptualize_store(const PipelineConfig& cfg,
                                         KgStore& store);

// Per-pattern and per-type breakdown, fixed shape for eyeballing fixtures.
std::string stats_report(const KgStore& store);

// Node anchor resolution for queries: a 32-hex id, a parsed-corpus file
// (first extracted eventuality wins), or plain lemma text matched against
// eventuality words/skeletons and concept words. Throws NotFoundError.
std::string resolve_node(const KgStore& store, const std::string& anchor,
                         const PatternTable& patterns,
                         const ConnectiveLexicon& lexicon);

}  // namespace evkg
