#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "evkg/store.hpp"

namespace evkg {

// Edge labels of the hybrid graph: the 15 relation types plus the two
// cross-layer links.
inline constexpr int kEdgeLabelCount = kRelTypeCount + 2;
inline constexpr int kConceptualizationLabel = kRelTypeCount;
inline constexpr int kInstantiationLabel = kRelTypeCount + 1;
const char* edge_label_name(int label);

// Directed weighted multigraph over eventuality (E) and concept (C) nodes:
// every positive typed weight of a relation record is one edge; every
// concept instance additionally yields a Conceptualization edge E->C with
// weight Pr(C|E) and a ConceptInstantiation edge C->E with weight
// Pr(C|E)*freq(E)/weight(C) (the Bayes flip, normalized per concept).
class HybridGraph {
 public:
  struct Edge {
    std::string tail;
    char tail_kind = 'E';
    int label = 0;
    double weight = 0.0;
  };

  explicit HybridGraph(const KgStore& store);

  const std::vector<std::string>& nodes() const { return nodes_; }  // sorted
  char kind_of(const std::string& id) const;
  // Outgoing edges sorted by (tail, label); nullptr when the node is a sink.
  const std::vector<Edge>* edges_of(const std::string& id) const;

 private:
  std::vector<std::string> nodes_;
  std::map<std::string, char> kinds_;
  std::map<std::string, std::vector<Edge>> adj_;
};

// One walk abstracted to types: `code` holds the start node kind followed by
// (label char, node kind) pairs per step, where the label char is 'A' plus
// the edge label index. Compact on purpose; walks number in the millions.
struct TypedPath {
  std::string code;
  size_t edges() const { return code.empty() ? 0 : (code.size() - 1) / 2; }
};

struct WalkConfig {
  size_t num_seeds = 50000;
  size_t walks_per_seed = 50;
  size_t walk_length = 4;  // edges per walk; walks stop early at sinks
  uint64_t rng_seed = 0;
  bool weighted = true;  // false = uniform transitions (ablation)
};

// Seeds are drawn uniformly over the sorted node list from one master
// stream; each walk then runs on its own stream derived from (seed index,
// walk index), so the result is reproducible and order-independent.
std::vector<TypedPath> random_walk(const HybridGraph& graph,
                                   const WalkConfig& config);

struct MetaPathCount {
  std::string path;  // "E-Conjunction-E-Contrast-E"
  size_t hops = 0;   // 2 or 3
  size_t count = 0;
};

// Every contiguous 2-edge and 3-edge window of every path contributes one
// count. Sorted by count descending, path ascending.
std::vector<MetaPathCount> count_metapaths(const std::vector<TypedPath>& paths);

// Window of a typed path rendered as a display string, `hops` edges starting
// at edge `offset`.
std::string metapath_string(const TypedPath& path, size_t offset, size_t hops);

struct PathInstance {
  std::vector<std::string> nodes;
  double score = 0.0;  // product of per-leg conditional probabilities
};

// Top-k concrete node sequences matching the meta-path, ranked by the
// product of leg-wise conditionals (each leg normalized over the current
// node's outgoing weight of that label), ties by node sequence.
std::vector<PathInstance> instantiate(const HybridGraph& graph,
                                      const std::string& metapath, size_t k);

struct MetaPathReport {
  size_t paths = 0;
  std::vector<MetaPathCount> counts;
};

MetaPathReport mine_metapaths(const HybridGraph& graph,
                              const WalkConfig& config);

}  // namespace evkg
