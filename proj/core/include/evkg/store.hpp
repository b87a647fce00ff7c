#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evkg/types.hpp"

namespace evkg {

// Aggregated row of the eventuality table. `frequency` is the summed weight
// of every merged instance.
struct EventualityRecord {
  std::string eid;
  std::string pattern;
  std::string canonical;  // digest preimage, kept for collision checks
  std::vector<std::string> verbs;
  std::vector<std::string> skeleton;
  std::vector<std::string> words;
  std::vector<std::string> pos;  // codes aligned with words
  std::vector<std::string> ner;  // labels aligned with words ("none" mostly)
  std::vector<int> skel;         // positions of skeleton tokens within words
  std::vector<std::array<std::string, 3>> deps;  // (gov, label, dep) lemmas
  double frequency = 0.0;
};

// Aggregated row of the concept table. `weight` tracks
// sum over instances of Pr(C|E) * frequency(E).
struct ConceptRecord {
  std::string cid;
  std::vector<std::string> words;
  std::string pattern;  // smallest pattern code among instances
  double weight = 0.0;
  std::map<std::string, double> instances;  // eid -> Pr(C|E)
};

enum class NodeKind : char { Event = 'E', Concept = 'C' };
char node_kind_code(NodeKind k);
NodeKind node_kind_from_code(char c);

// One head/tail pair with a weight slot per relation type. Endpoints may be
// eventualities or concepts; the kind flags say which.
struct RelationRecord {
  std::string rid;
  std::string head_id;
  std::string tail_id;
  NodeKind head_kind = NodeKind::Event;
  NodeKind tail_kind = NodeKind::Event;
  std::array<double, kRelTypeCount> weights{};

  double total() const;
  double weight(RelType t) const { return weights[(size_t)t]; }
};

struct UpsertSummary {
  size_t inserted = 0;
  size_t merged = 0;
};

struct PatternStat {
  size_t unique_count = 0;
  double total_frequency = 0.0;
};
struct RelTypeStat {
  size_t record_count = 0;
  double total_weight = 0.0;
};
struct StoreStats {
  size_t eventuality_count = 0;
  size_t concept_count = 0;
  size_t relation_count = 0;
  double eventuality_frequency_sum = 0.0;
  std::map<std::string, PatternStat> per_pattern;
  std::array<RelTypeStat, kRelTypeCount> per_type{};
};

// In-memory aggregate of the three tables. All maps are keyed by id, so
// iteration (and thus export) order is deterministic. Upserts merge weights;
// inserting two different canonicals under one id throws (collision check).
class KgStore {
 public:
  void set_strict(bool strict) { strict_ = strict; }

  void upsert_eventuality(const Eventuality& ev);
  UpsertSummary upsert_eventualities(const std::vector<Eventuality>& evs);
  void upsert_eventuality_record(const EventualityRecord& rec);

  // Strict mode rejects instances whose endpoints are not in the store yet.
  void upsert_relation(const RelationInstance& inst);
  UpsertSummary upsert_relations(const std::vector<RelationInstance>& insts);
  void upsert_relation_weight(const std::string& head_id, NodeKind head_kind,
                              const std::string& tail_id, NodeKind tail_kind,
                              RelType type, double weight);
  void upsert_relation_record(const RelationRecord& rec);

  void upsert_concept(const std::vector<std::string>& words,
                      const std::string& pattern, const std::string& eid,
                      double prob);
  void upsert_concept_record(const ConceptRecord& rec);

  // Folds `other` into this store (shard merge).
  void merge(const KgStore& other);

  // Core view: drops eventualities below `min_event_freq`, relation records
  // whose summed weight is <= `rel_weight_cutoff`, and anything dangling.
  KgStore filter_core(double min_event_freq = 2.0,
                      double rel_weight_cutoff = 1.0) const;

  const EventualityRecord* find_eventuality(const std::string& eid) const;
  const ConceptRecord* find_concept(const std::string& cid) const;
  const RelationRecord* find_relation(const std::string& rid) const;
  // Throwing variants for callers that require presence.
  const EventualityRecord& eventuality(const std::string& eid) const;
  const ConceptRecord& concept_row(const std::string& cid) const;

  bool has_node(const std::string& id) const;

  // Relation records touching `id` on the head side (outgoing) or tail side,
  // optionally restricted to one type (only records with weight > 0 in that
  // slot). Sorted by that weight descending, rid ascending on ties; without a
  // type filter, by total() descending.
  std::vector<const RelationRecord*> neighbors(
      const std::string& id, bool outgoing,
      std::optional<RelType> type = std::nullopt) const;

  // Eventualities eligible for conceptualization (frequency >= min_freq).
  std::vector<const EventualityRecord*> conceptualizable(
      double min_freq = 5.0) const;

  const std::map<std::string, EventualityRecord>& eventualities() const {
    return events_;
  }
  const std::map<std::string, ConceptRecord>& concepts() const {
    return concepts_;
  }
  const std::map<std::string, RelationRecord>& relations() const {
    return rels_;
  }

  StoreStats stats() const;

 private:
  bool strict_ = false;
  std::map<std::string, EventualityRecord> events_;
  std::map<std::string, ConceptRecord> concepts_;
  std::map<std::string, RelationRecord> rels_;
  std::map<std::string, std::vector<std::string>> by_head_;  // id -> rids
  std::map<std::string, std::vector<std::string>> by_tail_;

  RelationRecord& relation_row(const std::string& head_id, NodeKind head_kind,
                               const std::string& tail_id, NodeKind tail_kind);
};

// JSON-lines interchange. Rows are sorted by id, one object per line, object
// keys sorted, so equal stores serialize byte-identically.
void write_eventualities_jsonl(const KgStore& store, std::ostream& os);
void write_concepts_jsonl(const KgStore& store, std::ostream& os);
void write_relations_jsonl(const KgStore& store, std::ostream& os);

// Writes eventualities.jsonl / concepts.jsonl / relations.jsonl into `dir`
// (created if missing), staging each file through a temp name.
void export_jsonl(const KgStore& store, const std::string& dir);
KgStore import_jsonl(const std::string& dir);

// SQLite persistence of the same three tables (sqlite_io.cpp).
void save_sqlite(const KgStore& store, const std::string& path);
KgStore load_sqlite(const std::string& path);

}  // namespace evkg
