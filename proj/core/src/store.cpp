#include "evkg/store.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>

#include <nlohmann/json.hpp>

#include "evkg/error.hpp"
#include "evkg/ids.hpp"

namespace evkg {

using json = nlohmann::ordered_json;

char node_kind_code(NodeKind k) { return k == NodeKind::Event ? 'E' : 'C'; }

NodeKind node_kind_from_code(char c) {
  if (c == 'E') return NodeKind::Event;
  if (c == 'C') return NodeKind::Concept;
  throw Error(std::string("unknown node kind '") + c + "'");
}

double RelationRecord::total() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

namespace {

EventualityRecord record_from(const Eventuality& ev) {
  EventualityRecord rec;
  rec.eid = ev.eid;
  rec.pattern = ev.pattern;
  rec.canonical = ev.canonical;
  rec.verbs = ev.verb_lemmas();
  rec.skeleton = ev.skeleton_lemmas();
  rec.words = ev.word_lemmas();
  for (const Token& w : ev.words) {
    rec.pos.push_back(pos_code(w.pos));
    rec.ner.push_back(w.ner);
  }
  for (int s : ev.skeleton) {
    for (size_t k = 0; k < ev.words.size(); ++k) {
      if (ev.words[k].index == s) {
        rec.skel.push_back((int)k);
        break;
      }
    }
  }
  if (rec.skel.size() != ev.skeleton.size())
    throw Error("skeleton token missing from word set");
  for (const DepEdge& e : ev.edges) {
    const Token* g = ev.token_at(e.gov);
    const Token* d = ev.token_at(e.dep);
    if (!g || !d) throw Error("eventuality edge outside its word set");
    rec.deps.push_back({g->lemma, e.label, d->lemma});
  }
  std::sort(rec.deps.begin(), rec.deps.end());
  rec.frequency = ev.weight;
  return rec;
}

void check_canonical(const std::string& id, const std::string& stored,
                     const std::string& incoming) {
  if (!stored.empty() && !incoming.empty() && stored != incoming)
    throw Error("id collision on " + id + ": '" + stored + "' vs '" +
                incoming + "'");
}

}  // namespace

void KgStore::upsert_eventuality(const Eventuality& ev) {
  upsert_eventuality_record(record_from(ev));
}

UpsertSummary KgStore::upsert_eventualities(const std::vector<Eventuality>& evs) {
  UpsertSummary sum;
  for (const Eventuality& ev : evs) {
    bool existed = events_.count(ev.eid) > 0;
    upsert_eventuality(ev);
    existed ? ++sum.merged : ++sum.inserted;
  }
  return sum;
}

void KgStore::upsert_eventuality_record(const EventualityRecord& rec) {
  auto [it, inserted] = events_.try_emplace(rec.eid, rec);
  if (inserted) return;
  check_canonical(rec.eid, it->second.canonical, rec.canonical);
  it->second.frequency += rec.frequency;
}

RelationRecord& KgStore::relation_row(const std::string& head_id,
                                      NodeKind head_kind,
                                      const std::string& tail_id,
                                      NodeKind tail_kind) {
  std::string rid = rid_of(head_id, tail_id);
  auto [it, inserted] = rels_.try_emplace(rid);
  RelationRecord& rec = it->second;
  if (inserted) {
    rec.rid = rid;
    rec.head_id = head_id;
    rec.tail_id = tail_id;
    rec.head_kind = head_kind;
    rec.tail_kind = tail_kind;
    by_head_[head_id].push_back(rid);
    by_tail_[tail_id].push_back(rid);
  } else {
    if (rec.head_id != head_id || rec.tail_id != tail_id)
      throw Error("id collision on " + rid);
    if (rec.head_kind != head_kind || rec.tail_kind != tail_kind)
      throw Error("relation " + rid + " endpoint kind mismatch");
  }
  return rec;
}

void KgStore::upsert_relation(const RelationInstance& inst) {
  if (strict_) {
    if (!events_.count(inst.head_eid))
      throw Error("dangling head eid " + inst.head_eid);
    if (!events_.count(inst.tail_eid))
      throw Error("dangling tail eid " + inst.tail_eid);
  }
  upsert_relation_weight(inst.head_eid, NodeKind::Event, inst.tail_eid,
                         NodeKind::Event, inst.type, inst.weight);
}

UpsertSummary KgStore::upsert_relations(
    const std::vector<RelationInstance>& insts) {
  UpsertSummary sum;
  for (const RelationInstance& inst : insts) {
    bool existed = rels_.count(rid_of(inst.head_eid, inst.tail_eid)) > 0;
    upsert_relation(inst);
    existed ? ++sum.merged : ++sum.inserted;
  }
  return sum;
}

void KgStore::upsert_relation_weight(const std::string& head_id,
                                     NodeKind head_kind,
                                     const std::string& tail_id,
                                     NodeKind tail_kind, RelType type,
                                     double weight) {
  if (weight <= 0.0) throw Error("relation weight must be positive");
  relation_row(head_id, head_kind, tail_id, tail_kind)
      .weights[(size_t)type] += weight;
}

void KgStore::upsert_relation_record(const RelationRecord& rec) {
  RelationRecord& row =
      relation_row(rec.head_id, rec.head_kind, rec.tail_id, rec.tail_kind);
  for (size_t i = 0; i < rec.weights.size(); ++i)
    row.weights[i] += rec.weights[i];
}

void KgStore::upsert_concept(const std::vector<std::string>& words,
                             const std::string& pattern,
                             const std::string& eid, double prob) {
  if (prob <= 0.0 || prob > 1.0)
    throw Error("concept probability out of range");
  const EventualityRecord* ev = find_eventuality(eid);
  if (!ev) throw Error("concept instance references unknown eid " + eid);

  std::string cid = cid_of(words);
  auto [it, inserted] = concepts_.try_emplace(cid);
  ConceptRecord& rec = it->second;
  if (inserted) {
    rec.cid = cid;
    rec.words = words;
    rec.pattern = pattern;
  } else {
    if (rec.words != words) throw Error("id collision on " + cid);
    if (!pattern.empty() && (rec.pattern.empty() || pattern < rec.pattern))
      rec.pattern = pattern;
  }
  auto [inst, fresh] = rec.instances.try_emplace(eid, prob);
  if (!fresh) {
    // Re-conceptualizing is an overwrite, not a sum; back out the old share.
    rec.weight -= inst->second * ev->frequency;
    inst->second = prob;
  }
  rec.weight += prob * ev->frequency;
}

void KgStore::upsert_concept_record(const ConceptRecord& rec) {
  auto [it, inserted] = concepts_.try_emplace(rec.cid, rec);
  if (inserted) return;
  ConceptRecord& row = it->second;
  if (row.words != rec.words) throw Error("id collision on " + rec.cid);
  if (!rec.pattern.empty() && (row.pattern.empty() || rec.pattern < row.pattern))
    row.pattern = rec.pattern;
  for (const auto& [eid, prob] : rec.instances) row.instances[eid] = prob;
  row.weight += rec.weight;
}

void KgStore::merge(const KgStore& other) {
  for (const auto& [eid, rec] : other.events_) upsert_eventuality_record(rec);
  for (const auto& [cid, rec] : other.concepts_) upsert_concept_record(rec);
  for (const auto& [rid, rec] : other.rels_) upsert_relation_record(rec);
}

KgStore KgStore::filter_core(double min_event_freq,
                             double rel_weight_cutoff) const {
  KgStore out;
  for (const auto& [eid, rec] : events_)
    if (rec.frequency >= min_event_freq) out.events_.emplace(eid, rec);

  for (const auto& [cid, rec] : concepts_) {
    ConceptRecord kept = rec;
    kept.weight = 0.0;
    for (auto it = kept.instances.begin(); it != kept.instances.end();) {
      const EventualityRecord* ev = out.find_eventuality(it->first);
      if (!ev) {
        it = kept.instances.erase(it);
        continue;
      }
      kept.weight += it->second * ev->frequency;
      ++it;
    }
    if (!kept.instances.empty()) out.concepts_.emplace(cid, std::move(kept));
  }

  for (const auto& [rid, rec] : rels_) {
    if (rec.total() <= rel_weight_cutoff) continue;
    if (!out.has_node(rec.head_id) || !out.has_node(rec.tail_id)) continue;
    out.rels_.emplace(rid, rec);
    out.by_head_[rec.head_id].push_back(rid);
    out.by_tail_[rec.tail_id].push_back(rid);
  }
  return out;
}

const EventualityRecord* KgStore::find_eventuality(const std::string& eid) const {
  auto it = events_.find(eid);
  return it == events_.end() ? nullptr : &it->second;
}

const ConceptRecord* KgStore::find_concept(const std::string& cid) const {
  auto it = concepts_.find(cid);
  return it == concepts_.end() ? nullptr : &it->second;
}

const RelationRecord* KgStore::find_relation(const std::string& rid) const {
  auto it = rels_.find(rid);
  return it == rels_.end() ? nullptr : &it->second;
}

const EventualityRecord& KgStore::eventuality(const std::string& eid) const {
  const EventualityRecord* rec = find_eventuality(eid);
  if (!rec) throw NotFoundError("eventuality " + eid);
  return *rec;
}

const ConceptRecord& KgStore::concept_row(const std::string& cid) const {
  const ConceptRecord* rec = find_concept(cid);
  if (!rec) throw NotFoundError("concept " + cid);
  return *rec;
}

bool KgStore::has_node(const std::string& id) const {
  return events_.count(id) > 0 || concepts_.count(id) > 0;
}

std::vector<const RelationRecord*> KgStore::neighbors(
    const std::string& id, bool outgoing, std::optional<RelType> type) const {
  const auto& index = outgoing ? by_head_ : by_tail_;
  std::vector<const RelationRecord*> out;
  auto it = index.find(id);
  if (it == index.end()) return out;
  for (const std::string& rid : it->second) {
    const RelationRecord& rec = rels_.at(rid);
    if (type && rec.weight(*type) <= 0.0) continue;
    out.push_back(&rec);
  }
  std::sort(out.begin(), out.end(),
            [&](const RelationRecord* a, const RelationRecord* b) {
              double wa = type ? a->weight(*type) : a->total();
              double wb = type ? b->weight(*type) : b->total();
              if (wa != wb) return wa > wb;
              return a->rid < b->rid;
            });
  return out;
}

std::vector<const EventualityRecord*> KgStore::conceptualizable(
    double min_freq) const {
  std::vector<const EventualityRecord*> out;
  for (const auto& [eid, rec] : events_)
    if (rec.frequency >= min_freq) out.push_back(&rec);
  return out;
}

StoreStats KgStore::stats() const {
  StoreStats st;
  st.eventuality_count = events_.size();
  st.concept_count = concepts_.size();
  st.relation_count = rels_.size();
  for (const auto& [eid, rec] : events_) {
    st.eventuality_frequency_sum += rec.frequency;
    PatternStat& ps = st.per_pattern[rec.pattern];
    ps.unique_count += 1;
    ps.total_frequency += rec.frequency;
  }
  for (const auto& [rid, rec] : rels_) {
    for (size_t i = 0; i < rec.weights.size(); ++i) {
      if (rec.weights[i] <= 0.0) continue;
      st.per_type[i].record_count += 1;
      st.per_type[i].total_weight += rec.weights[i];
    }
  }
  return st;
}

namespace {

json deps_json(const std::vector<std::array<std::string, 3>>& deps) {
  json arr = json::array();
  for (const auto& d : deps) arr.push_back(json::array({d[0], d[1], d[2]}));
  return arr;
}

}  // namespace

void write_eventualities_jsonl(const KgStore& store, std::ostream& os) {
  for (const auto& [eid, rec] : store.eventualities()) {
    json row;
    row["canonical"] = rec.canonical;
    row["deps"] = deps_json(rec.deps);
    row["eid"] = rec.eid;
    row["frequency"] = rec.frequency;
    row["ner"] = rec.ner;
    row["pattern"] = rec.pattern;
    row["pos"] = rec.pos;
    row["skel"] = rec.skel;
    row["skeleton"] = rec.skeleton;
    row["verbs"] = rec.verbs;
    row["words"] = rec.words;
    os << row.dump() << '\n';
  }
}

void write_concepts_jsonl(const KgStore& store, std::ostream& os) {
  for (const auto& [cid, rec] : store.concepts()) {
    json insts = json::array();
    for (const auto& [eid, prob] : rec.instances)
      insts.push_back(json::array({eid, prob}));
    json row;
    row["cid"] = rec.cid;
    row["instances"] = insts;
    row["pattern"] = rec.pattern;
    row["weight"] = rec.weight;
    row["words"] = rec.words;
    os << row.dump() << '\n';
  }
}

void write_relations_jsonl(const KgStore& store, std::ostream& os) {
  for (const auto& [rid, rec] : store.relations()) {
    json weights;
    for (size_t i = 0; i < rec.weights.size(); ++i)
      if (rec.weights[i] > 0.0) weights[kRelTypeNames[i]] = rec.weights[i];
    json row;
    row["head"] = rec.head_id;
    row["head_kind"] = std::string(1, node_kind_code(rec.head_kind));
    row["rid"] = rec.rid;
    row["tail"] = rec.tail_id;
    row["tail_kind"] = std::string(1, node_kind_code(rec.tail_kind));
    row["weights"] = weights.is_null() ? json::object() : weights;
    os << row.dump() << '\n';
  }
}

namespace {

void write_staged(const std::string& path,
                  const std::function<void(std::ostream&)>& writer) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + tmp + " for writing");
    writer(os);
    os.flush();
    if (!os) throw Error("write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("rename " + tmp + " -> " + path + ": " + ec.message());
}

}  // namespace

void export_jsonl(const KgStore& store, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_staged(dir + "/eventualities.jsonl",
               [&](std::ostream& os) { write_eventualities_jsonl(store, os); });
  write_staged(dir + "/concepts.jsonl",
               [&](std::ostream& os) { write_concepts_jsonl(store, os); });
  write_staged(dir + "/relations.jsonl",
               [&](std::ostream& os) { write_relations_jsonl(store, os); });
}

namespace {

json parse_row(const std::string& line, const std::string& file, long lineno) {
  json row = json::parse(line, nullptr, false);
  if (row.is_discarded() || !row.is_object())
    throw ParseError("bad JSON row in " + file, lineno);
  return row;
}

std::vector<std::string> string_list(const json& arr) {
  std::vector<std::string> out;
  for (const auto& v : arr) out.push_back(v.get<std::string>());
  return out;
}

}  // namespace

KgStore import_jsonl(const std::string& dir) {
  KgStore store;
  std::string path = dir + "/eventualities.jsonl";
  std::ifstream ev_in(path);
  if (!ev_in) throw Error("cannot open " + path);
  std::string line;
  long lineno = 0;
  while (std::getline(ev_in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json row = parse_row(line, path, lineno);
    EventualityRecord rec;
    rec.eid = row.at("eid").get<std::string>();
    rec.pattern = row.at("pattern").get<std::string>();
    rec.canonical = row.at("canonical").get<std::string>();
    rec.verbs = string_list(row.at("verbs"));
    rec.skeleton = string_list(row.at("skeleton"));
    rec.words = string_list(row.at("words"));
    rec.pos = string_list(row.at("pos"));
    rec.ner = string_list(row.at("ner"));
    for (const auto& v : row.at("skel")) rec.skel.push_back(v.get<int>());
    for (const auto& d : row.at("deps"))
      rec.deps.push_back({d.at(0).get<std::string>(),
                          d.at(1).get<std::string>(),
                          d.at(2).get<std::string>()});
    rec.frequency = row.at("frequency").get<double>();
    store.upsert_eventuality_record(rec);
  }

  path = dir + "/concepts.jsonl";
  std::ifstream c_in(path);
  if (c_in) {
    lineno = 0;
    while (std::getline(c_in, line)) {
      ++lineno;
      if (line.empty()) continue;
      json row = parse_row(line, path, lineno);
      ConceptRecord rec;
      rec.cid = row.at("cid").get<std::string>();
      rec.words = string_list(row.at("words"));
      rec.pattern = row.at("pattern").get<std::string>();
      rec.weight = row.at("weight").get<double>();
      for (const auto& inst : row.at("instances"))
        rec.instances[inst.at(0).get<std::string>()] = inst.at(1).get<double>();
      store.upsert_concept_record(rec);
    }
  }

  path = dir + "/relations.jsonl";
  std::ifstream r_in(path);
  if (r_in) {
    lineno = 0;
    while (std::getline(r_in, line)) {
      ++lineno;
      if (line.empty()) continue;
      json row = parse_row(line, path, lineno);
      RelationRecord rec;
      rec.rid = row.at("rid").get<std::string>();
      rec.head_id = row.at("head").get<std::string>();
      rec.tail_id = row.at("tail").get<std::string>();
      rec.head_kind =
          node_kind_from_code(row.at("head_kind").get<std::string>().at(0));
      rec.tail_kind =
          node_kind_from_code(row.at("tail_kind").get<std::string>().at(0));
      for (const auto& [name, w] : row.at("weights").items()) {
        std::optional<RelType> t = rel_from_name(name);
        if (!t) throw ParseError("unknown relation type " + name, lineno);
        rec.weights[(size_t)*t] = w.get<double>();
      }
      if (rec.rid != rid_of(rec.head_id, rec.tail_id))
        throw ParseError("rid does not match endpoints", lineno);
      store.upsert_relation_record(rec);
    }
  }
  return store;
}

}  // namespace evkg
