#pragma once

#include <map>
#include <string>
#include <vector>

#include "evkg/store.hpp"
#include "evkg/types.hpp"

namespace evkg {

enum class GraphLayer { Event, Concept, Hybrid };
const char* layer_name(GraphLayer l);
std::optional<GraphLayer> layer_from_name(std::string_view name);

struct InferOptions {
  GraphLayer layer = GraphLayer::Event;
  bool include_cooccurrence = true;
};

// One two-hop path through `middle_id`; leg values are the per-hop
// conditional probabilities.
struct WitnessPath {
  std::string middle_id;
  double leg1 = 0.0;
  double leg2 = 0.0;
};

struct ScoredTail {
  std::string id;
  double prob = 0.0;
  std::vector<WitnessPath> witnesses;  // two-hop queries only
};

struct ScoredRel {
  RelType type = RelType::CoOccurrence;
  double prob = 0.0;
};

struct ScoredRelPair {
  RelType first = RelType::CoOccurrence;
  RelType second = RelType::CoOccurrence;
  double prob = 0.0;
};

// Read-only query engine over a store snapshot. The adjacency is frozen at
// construction; accumulation always runs in ascending id order, so equal
// inputs give bit-equal outputs. Rankings are probability descending with
// ascending id (or type index) tie-breaks; callers truncate to top-k.
class InferenceEngine {
 public:
  explicit InferenceEngine(const KgStore& store, InferOptions opts = {});

  // Pr(t | head, type) = w(head,type,t) / sum over tails. Empty when the
  // head has no edge of that type.
  std::vector<ScoredTail> tails_1hop(const std::string& head, RelType type) const;

  // Pr(t | head, t1 then t2) = sum over middles of the leg products.
  std::vector<ScoredTail> tails_2hop(const std::string& head, RelType t1,
                                     RelType t2) const;

  // Pr(type | head, tail) over the pair's present types.
  std::vector<ScoredRel> relations_1hop(const std::string& head,
                                        const std::string& tail) const;

  // Pr(type | head) marginalized over all tails.
  std::vector<ScoredRel> type_prior(const std::string& head) const;

  // score(t1,t2) = Pr(t1|head) * sum over middles of
  // Pr(m|head,t1) * Pr(t2|m,tail).
  std::vector<ScoredRelPair> relations_2hop(const std::string& head,
                                            const std::string& tail) const;

  const InferOptions& options() const { return opts_; }

 private:
  bool type_allowed(RelType t) const;
  void require_node(const std::string& id) const;
  // (tail, probability) ascending by tail id; empty on zero support.
  std::vector<std::pair<std::string, double>> dist_1hop(const std::string& head,
                                                        RelType type) const;
  const RelationRecord* pair_record(const std::string& head,
                                    const std::string& tail) const;

  InferOptions opts_;
  std::map<std::string, std::vector<const RelationRecord*>> out_;  // by head
  std::map<std::string, const RelationRecord*> pairs_;             // by rid
  std::set<std::string> nodes_;
};

}  // namespace evkg
