#include "evkg/infer.hpp"

#include <algorithm>

#include "evkg/error.hpp"
#include "evkg/ids.hpp"

namespace evkg {

const char* layer_name(GraphLayer l) {
  switch (l) {
    case GraphLayer::Event: return "event";
    case GraphLayer::Concept: return "concept";
    case GraphLayer::Hybrid: return "hybrid";
  }
  return "event";
}

std::optional<GraphLayer> layer_from_name(std::string_view name) {
  if (name == "event") return GraphLayer::Event;
  if (name == "concept") return GraphLayer::Concept;
  if (name == "hybrid") return GraphLayer::Hybrid;
  return std::nullopt;
}

namespace {

bool layer_keeps(GraphLayer layer, const RelationRecord& rec) {
  switch (layer) {
    case GraphLayer::Event:
      return rec.head_kind == NodeKind::Event &&
             rec.tail_kind == NodeKind::Event;
    case GraphLayer::Concept:
      return rec.head_kind == NodeKind::Concept &&
             rec.tail_kind == NodeKind::Concept;
    case GraphLayer::Hybrid:
      return true;
  }
  return true;
}

void rank_tails(std::vector<ScoredTail>& out) {
  std::sort(out.begin(), out.end(), [](const ScoredTail& a, const ScoredTail& b) {
    if (a.prob != b.prob) return a.prob > b.prob;
    return a.id < b.id;
  });
}

}  // namespace

InferenceEngine::InferenceEngine(const KgStore& store, InferOptions opts)
    : opts_(opts) {
  for (const auto& [eid, rec] : store.eventualities()) nodes_.insert(eid);
  for (const auto& [cid, rec] : store.concepts()) nodes_.insert(cid);
  for (const auto& [rid, rec] : store.relations()) {
    if (!layer_keeps(opts_.layer, rec)) continue;
    out_[rec.head_id].push_back(&rec);
    pairs_[rid] = &rec;
  }
  for (auto& [head, list] : out_) {
    std::sort(list.begin(), list.end(),
              [](const RelationRecord* a, const RelationRecord* b) {
                return a->tail_id < b->tail_id;
              });
  }
}

bool InferenceEngine::type_allowed(RelType t) const {
  return opts_.include_cooccurrence || t != RelType::CoOccurrence;
}

void InferenceEngine::require_node(const std::string& id) const {
  if (!nodes_.count(id)) throw NotFoundError("node " + id);
}

std::vector<std::pair<std::string, double>> InferenceEngine::dist_1hop(
    const std::string& head, RelType type) const {
  require_node(head);
  std::vector<std::pair<std::string, double>> out;
  if (!type_allowed(type)) return out;
  auto it = out_.find(head);
  if (it == out_.end()) return out;
  double sum = 0.0;
  for (const RelationRecord* rec : it->second) {
    double w = rec->weight(type);
    if (w <= 0.0) continue;
    out.push_back({rec->tail_id, w});
    sum += w;
  }
  for (auto& [id, w] : out) w /= sum;
  return out;
}

const RelationRecord* InferenceEngine::pair_record(
    const std::string& head, const std::string& tail) const {
  auto it = pairs_.find(rid_of(head, tail));
  return it == pairs_.end() ? nullptr : it->second;
}

std::vector<ScoredTail> InferenceEngine::tails_1hop(const std::string& head,
                                                    RelType type) const {
  std::vector<ScoredTail> out;
  for (const auto& [id, p] : dist_1hop(head, type)) out.push_back({id, p, {}});
  rank_tails(out);
  return out;
}

std::vector<ScoredTail> InferenceEngine::tails_2hop(const std::string& head,
                                                    RelType t1,
                                                    RelType t2) const {
  std::map<std::string, double> acc;
  std::map<std::string, std::vector<WitnessPath>> wits;
  for (const auto& [mid, p1] : dist_1hop(head, t1)) {
    for (const auto& [tail, p2] : dist_1hop(mid, t2)) {
      acc[tail] += p1 * p2;
      wits[tail].push_back({mid, p1, p2});
    }
  }
  std::vector<ScoredTail> out;
  for (const auto& [id, p] : acc)
    out.push_back({id, p, std::move(wits[id])});
  rank_tails(out);
  return out;
}

std::vector<ScoredRel> InferenceEngine::relations_1hop(
    const std::string& head, const std::string& tail) const {
  require_node(head);
  require_node(tail);
  std::vector<ScoredRel> out;
  const RelationRecord* rec = pair_record(head, tail);
  if (!rec) return out;
  double sum = 0.0;
  for (size_t i = 0; i < rec->weights.size(); ++i) {
    if (!type_allowed((RelType)i) || rec->weights[i] <= 0.0) continue;
    out.push_back({(RelType)i, rec->weights[i]});
    sum += rec->weights[i];
  }
  for (ScoredRel& r : out) r.prob /= sum;
  std::sort(out.begin(), out.end(), [](const ScoredRel& a, const ScoredRel& b) {
    if (a.prob != b.prob) return a.prob > b.prob;
    return (size_t)a.type < (size_t)b.type;
  });
  return out;
}

std::vector<ScoredRel> InferenceEngine::type_prior(
    const std::string& head) const {
  require_node(head);
  std::array<double, kRelTypeCount> totals{};
  auto it = out_.find(head);
  if (it != out_.end()) {
    for (const RelationRecord* rec : it->second)
      for (size_t i = 0; i < rec->weights.size(); ++i)
        if (type_allowed((RelType)i)) totals[i] += rec->weights[i];
  }
  double sum = 0.0;
  for (double w : totals) sum += w;
  std::vector<ScoredRel> out;
  if (sum <= 0.0) return out;
  for (size_t i = 0; i < totals.size(); ++i)
    if (totals[i] > 0.0) out.push_back({(RelType)i, totals[i] / sum});
  std::sort(out.begin(), out.end(), [](const ScoredRel& a, const ScoredRel& b) {
    if (a.prob != b.prob) return a.prob > b.prob;
    return (size_t)a.type < (size_t)b.type;
  });
  return out;
}

std::vector<ScoredRelPair> InferenceEngine::relations_2hop(
    const std::string& head, const std::string& tail) const {
  require_node(head);
  require_node(tail);

  std::array<double, kRelTypeCount> prior{};
  for (const ScoredRel& r : type_prior(head)) prior[(size_t)r.type] = r.prob;

  std::array<std::array<double, kRelTypeCount>, kRelTypeCount> score{};
  for (size_t i = 0; i < (size_t)kRelTypeCount; ++i) {
    if (prior[i] <= 0.0) continue;
    for (const auto& [mid, p1] : dist_1hop(head, (RelType)i)) {
      const RelationRecord* rec = pair_record(mid, tail);
      if (!rec) continue;
      double sum = 0.0;
      for (size_t j = 0; j < rec->weights.size(); ++j)
        if (type_allowed((RelType)j)) sum += rec->weights[j];
      if (sum <= 0.0) continue;
      for (size_t j = 0; j < rec->weights.size(); ++j) {
        if (!type_allowed((RelType)j) || rec->weights[j] <= 0.0) continue;
        score[i][j] += prior[i] * p1 * (rec->weights[j] / sum);
      }
    }
  }

  std::vector<ScoredRelPair> out;
  for (size_t i = 0; i < (size_t)kRelTypeCount; ++i)
    for (size_t j = 0; j < (size_t)kRelTypeCount; ++j)
      if (score[i][j] > 0.0) out.push_back({(RelType)i, (RelType)j, score[i][j]});
  std::sort(out.begin(), out.end(),
            [](const ScoredRelPair& a, const ScoredRelPair& b) {
              if (a.prob != b.prob) return a.prob > b.prob;
              if (a.first != b.first) return (size_t)a.first < (size_t)b.first;
              return (size_t)a.second < (size_t)b.second;
            });
  return out;
}

}  // namespace evkg
