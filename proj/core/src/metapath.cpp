#include "evkg/metapath.hpp"

#include <algorithm>

#include "evkg/error.hpp"
#include "evkg/rng.hpp"

namespace evkg {

const char* edge_label_name(int label) {
  if (label >= 0 && label < kRelTypeCount) return kRelTypeNames[label];
  if (label == kConceptualizationLabel) return "Conceptualization";
  if (label == kInstantiationLabel) return "ConceptInstantiation";
  throw Error("edge label out of range");
}

HybridGraph::HybridGraph(const KgStore& store) {
  for (const auto& [eid, rec] : store.eventualities()) kinds_[eid] = 'E';
  for (const auto& [cid, rec] : store.concepts()) kinds_[cid] = 'C';

  for (const auto& [rid, rec] : store.relations()) {
    char tk = node_kind_code(rec.tail_kind);
    for (size_t i = 0; i < rec.weights.size(); ++i) {
      if (rec.weights[i] <= 0.0) continue;
      adj_[rec.head_id].push_back({rec.tail_id, tk, (int)i, rec.weights[i]});
    }
  }

  for (const auto& [cid, rec] : store.concepts()) {
    if (rec.weight <= 0.0) continue;
    for (const auto& [eid, prob] : rec.instances) {
      const EventualityRecord* ev = store.find_eventuality(eid);
      if (!ev) continue;
      adj_[eid].push_back({cid, 'C', kConceptualizationLabel, prob});
      adj_[cid].push_back(
          {eid, 'E', kInstantiationLabel, prob * ev->frequency / rec.weight});
    }
  }

  for (auto& [id, edges] : adj_) {
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      if (a.tail != b.tail) return a.tail < b.tail;
      return a.label < b.label;
    });
  }
  for (const auto& [id, kind] : kinds_) nodes_.push_back(id);
}

char HybridGraph::kind_of(const std::string& id) const {
  auto it = kinds_.find(id);
  if (it == kinds_.end()) throw NotFoundError("node " + id);
  return it->second;
}

const std::vector<HybridGraph::Edge>* HybridGraph::edges_of(
    const std::string& id) const {
  auto it = adj_.find(id);
  return it == adj_.end() ? nullptr : &it->second;
}

std::vector<TypedPath> random_walk(const HybridGraph& graph,
                                   const WalkConfig& config) {
  if (!config.num_seeds || !config.walks_per_seed || !config.walk_length)
    throw Error("walk config counts must be positive");
  const std::vector<std::string>& nodes = graph.nodes();
  if (nodes.empty()) throw Error("cannot walk an empty graph");

  std::vector<TypedPath> out;
  out.reserve(config.num_seeds * config.walks_per_seed);

  DetRng seed_rng(mix_seed(config.rng_seed, 0x5eed));
  std::vector<double> weights;
  for (size_t s = 0; s < config.num_seeds; ++s) {
    const std::string* seed = &nodes[seed_rng.below(nodes.size())];
    for (size_t w = 0; w < config.walks_per_seed; ++w) {
      DetRng rng(mix_seed(config.rng_seed, s + 1, w + 1));
      TypedPath path;
      path.code.push_back(graph.kind_of(*seed));
      const std::string* cur = seed;
      for (size_t step = 0; step < config.walk_length; ++step) {
        const std::vector<HybridGraph::Edge>* edges = graph.edges_of(*cur);
        if (!edges || edges->empty()) break;
        size_t pick;
        if (config.weighted) {
          weights.clear();
          for (const HybridGraph::Edge& e : *edges) weights.push_back(e.weight);
          pick = rng.weighted(weights);
        } else {
          pick = (size_t)rng.below(edges->size());
        }
        const HybridGraph::Edge& e = (*edges)[pick];
        path.code.push_back((char)('A' + e.label));
        path.code.push_back(e.tail_kind);
        cur = &e.tail;
      }
      out.push_back(std::move(path));
    }
  }
  return out;
}

std::string metapath_string(const TypedPath& path, size_t offset,
                            size_t hops) {
  if (offset + hops > path.edges()) throw Error("window exceeds path length");
  std::string s;
  s.push_back(path.code[2 * offset]);
  for (size_t i = 0; i < hops; ++i) {
    s += '-';
    s += edge_label_name(path.code[2 * (offset + i) + 1] - 'A');
    s += '-';
    s.push_back(path.code[2 * (offset + i) + 2]);
  }
  return s;
}

std::vector<MetaPathCount> count_metapaths(
    const std::vector<TypedPath>& paths) {
  std::map<std::string, std::pair<size_t, size_t>> table;  // path -> (hops, n)
  for (const TypedPath& p : paths) {
    size_t edges = p.edges();
    for (size_t hops = 2; hops <= 3; ++hops) {
      if (edges < hops) continue;
      for (size_t off = 0; off + hops <= edges; ++off) {
        auto& [h, n] = table[metapath_string(p, off, hops)];
        h = hops;
        ++n;
      }
    }
  }
  std::vector<MetaPathCount> out;
  for (const auto& [path, hn] : table) out.push_back({path, hn.first, hn.second});
  std::sort(out.begin(), out.end(),
            [](const MetaPathCount& a, const MetaPathCount& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.path < b.path;
            });
  return out;
}

namespace {

struct ParsedMetaPath {
  std::vector<char> kinds;
  std::vector<int> labels;
};

ParsedMetaPath parse_metapath(const std::string& s) {
  ParsedMetaPath mp;
  size_t pos = 0;
  auto expect_kind = [&]() {
    if (pos >= s.size() || (s[pos] != 'E' && s[pos] != 'C'))
      throw Error("bad meta-path (expected E or C at position " +
                  std::to_string(pos) + "): " + s);
    mp.kinds.push_back(s[pos]);
    ++pos;
  };
  expect_kind();
  while (pos < s.size()) {
    if (s[pos] != '-') throw Error("bad meta-path (expected '-'): " + s);
    ++pos;
    int found = -1;
    size_t found_len = 0;
    for (int l = 0; l < kEdgeLabelCount; ++l) {
      std::string name = edge_label_name(l);
      if (s.compare(pos, name.size(), name) == 0 && name.size() > found_len) {
        found = l;
        found_len = name.size();
      }
    }
    if (found < 0) throw Error("bad meta-path (unknown edge label): " + s);
    mp.labels.push_back(found);
    pos += found_len;
    if (pos >= s.size() || s[pos] != '-')
      throw Error("bad meta-path (expected '-' after label): " + s);
    ++pos;
    expect_kind();
  }
  if (mp.labels.empty()) throw Error("meta-path needs at least one edge: " + s);
  return mp;
}

void instantiate_rec(const HybridGraph& graph, const ParsedMetaPath& mp,
                     size_t depth, std::vector<std::string>& nodes,
                     double score, std::vector<PathInstance>& out) {
  if (depth == mp.labels.size()) {
    out.push_back({nodes, score});
    return;
  }
  const std::vector<HybridGraph::Edge>* edges = graph.edges_of(nodes.back());
  if (!edges) return;
  double total = 0.0;
  for (const HybridGraph::Edge& e : *edges)
    if (e.label == mp.labels[depth]) total += e.weight;
  if (total <= 0.0) return;
  for (const HybridGraph::Edge& e : *edges) {
    if (e.label != mp.labels[depth] || e.tail_kind != mp.kinds[depth + 1])
      continue;
    nodes.push_back(e.tail);
    instantiate_rec(graph, mp, depth + 1, nodes, score * (e.weight / total),
                    out);
    nodes.pop_back();
  }
}

}  // namespace

std::vector<PathInstance> instantiate(const HybridGraph& graph,
                                      const std::string& metapath, size_t k) {
  ParsedMetaPath mp = parse_metapath(metapath);
  std::vector<PathInstance> out;
  for (const std::string& start : graph.nodes()) {
    if (graph.kind_of(start) != mp.kinds[0]) continue;
    std::vector<std::string> nodes{start};
    instantiate_rec(graph, mp, 0, nodes, 1.0, out);
  }
  std::sort(out.begin(), out.end(),
            [](const PathInstance& a, const PathInstance& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.nodes < b.nodes;
            });
  if (out.size() > k) out.resize(k);
  return out;
}

MetaPathReport mine_metapaths(const HybridGraph& graph,
                              const WalkConfig& config) {
  std::vector<TypedPath> paths = random_walk(graph, config);
  MetaPathReport report;
  report.paths = paths.size();
  report.counts = count_metapaths(paths);
  return report;
}

}  // namespace evkg
