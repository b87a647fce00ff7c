#include "evkg/rules.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "evkg/error.hpp"

namespace evkg {

const char* multiplicity_mode_name(MultiplicityMode m) {
  switch (m) {
    case MultiplicityMode::Round: return "round";
    case MultiplicityMode::Ceil: return "ceil";
    case MultiplicityMode::WeightExact: return "weight-exact";
  }
  return "round";
}

std::optional<MultiplicityMode> multiplicity_mode_from_name(
    std::string_view name) {
  if (name == "round") return MultiplicityMode::Round;
  if (name == "ceil") return MultiplicityMode::Ceil;
  if (name == "weight-exact") return MultiplicityMode::WeightExact;
  return std::nullopt;
}

namespace {

// Multiset contribution of one weighted triple; 0 drops the triple.
double multiplicity(MultiplicityMode mode, double w) {
  switch (mode) {
    case MultiplicityMode::Round: return std::nearbyint(w);  // half-to-even
    case MultiplicityMode::Ceil: return std::ceil(w);
    case MultiplicityMode::WeightExact: return w;
  }
  return 0.0;
}

void sort_facts(FactSet& fs) {
  std::sort(fs.facts.begin(), fs.facts.end(), [](const Fact& a, const Fact& b) {
    if (a.type != b.type) return (size_t)a.type < (size_t)b.type;
    if (a.head != b.head) return a.head < b.head;
    return a.tail < b.tail;
  });
}

void add_weighted(FactSet& fs, MultiplicityMode mode, const std::string& h,
                  RelType t, const std::string& tl, double w) {
  double m = multiplicity(mode, w);
  if (m <= 0.0) return;
  fs.facts.push_back({h, t, tl});
  fs.type_sizes[(size_t)t] += m;
}

}  // namespace

FactSet expand_facts(const KgStore& store, GraphLayer layer,
                     MultiplicityMode mode, bool include_cooccurrence) {
  FactSet fs;
  for (const auto& [rid, rec] : store.relations()) {
    bool ee = rec.head_kind == NodeKind::Event &&
              rec.tail_kind == NodeKind::Event;
    bool cc = rec.head_kind == NodeKind::Concept &&
              rec.tail_kind == NodeKind::Concept;
    if (layer == GraphLayer::Event && !ee) continue;
    if (layer == GraphLayer::Concept && !cc) continue;
    for (size_t i = 0; i < rec.weights.size(); ++i) {
      if ((RelType)i == RelType::CoOccurrence && !include_cooccurrence)
        continue;
      if (rec.weights[i] <= 0.0) continue;
      add_weighted(fs, mode, rec.head_id, (RelType)i, rec.tail_id,
                   rec.weights[i]);
    }
  }
  sort_facts(fs);
  return fs;
}

FactSet facts_from_triples(
    const std::vector<std::tuple<std::string, RelType, std::string, double>>&
        triples,
    MultiplicityMode mode) {
  FactSet fs;
  std::map<std::pair<std::string, std::string>,
           std::array<double, kRelTypeCount>>
      agg;
  for (const auto& [h, t, tl, w] : triples)
    agg[{h, tl}][(size_t)t] += w;
  for (const auto& [pair, weights] : agg)
    for (size_t i = 0; i < weights.size(); ++i)
      if (weights[i] > 0.0)
        add_weighted(fs, mode, pair.first, (RelType)i, pair.second, weights[i]);
  sort_facts(fs);
  return fs;
}

std::string atom_string(const Atom& a) {
  static const char* kVars[] = {"?a", "?b", "?f"};
  return std::string("⟨") + kVars[a.subj] + " " + rel_name(a.type) + " " +
         kVars[a.obj] + "⟩";
}

std::string HornRule::to_string() const {
  std::string s;
  for (size_t i = 0; i < body.size(); ++i) {
    if (i) s += " ∧ ";
    s += atom_string(body[i]);
  }
  s += " ⇒ ";
  s += atom_string(head);
  return s;
}

namespace {

struct FactIndex {
  // per type: distinct pairs, forward and reverse adjacency, subjects
  std::array<std::set<std::pair<std::string, std::string>>, kRelTypeCount>
      pairs;
  std::array<std::map<std::string, std::vector<std::string>>, kRelTypeCount>
      out, in;
  std::array<std::set<std::string>, kRelTypeCount> subjects;

  explicit FactIndex(const FactSet& fs) {
    for (const Fact& f : fs.facts) {
      size_t t = (size_t)f.type;
      if (!pairs[t].insert({f.head, f.tail}).second) continue;
      out[t][f.head].push_back(f.tail);
      in[t][f.tail].push_back(f.head);
      subjects[t].insert(f.head);
    }
  }
};

using Binding = std::array<const std::string*, 3>;  // a, b, f (null = free)

// Enumerates all distinct (a, b) pairs satisfying the body. Bodies here are
// 1 or 2 atoms and connected, so after the first atom binds its variables the
// second always has at least one bound endpoint.
std::set<std::pair<std::string, std::string>> body_pairs(
    const std::vector<Atom>& body, const FactIndex& idx) {
  std::set<std::pair<std::string, std::string>> result;
  const Atom& a0 = body[0];
  for (const auto& [s, o] : idx.pairs[(size_t)a0.type]) {
    Binding bind{nullptr, nullptr, nullptr};
    bind[a0.subj] = &s;
    bind[a0.obj] = &o;
    if (body.size() == 1) {
      result.insert({*bind[0], *bind[1]});
      continue;
    }
    const Atom& a1 = body[1];
    const std::string* bs = bind[a1.subj];
    const std::string* bo = bind[a1.obj];
    size_t t = (size_t)a1.type;
    if (bs && bo) {
      if (idx.pairs[t].count({*bs, *bo})) result.insert({*bind[0], *bind[1]});
    } else if (bs) {
      auto it = idx.out[t].find(*bs);
      if (it == idx.out[t].end()) continue;
      for (const std::string& cand : it->second) {
        Binding b2 = bind;
        b2[a1.obj] = &cand;
        result.insert({*b2[0], *b2[1]});
      }
    } else {
      auto it = idx.in[t].find(*bo);
      if (it == idx.in[t].end()) continue;
      for (const std::string& cand : it->second) {
        Binding b2 = bind;
        b2[a1.subj] = &cand;
        result.insert({*b2[0], *b2[1]});
      }
    }
  }
  return result;
}

HornRule score_on_index(const std::vector<Atom>& body, RelType head_type,
                        const FactIndex& idx, const FactSet& fs) {
  HornRule rule;
  rule.body = body;
  rule.head = {0, head_type, 1};

  auto pairs = body_pairs(body, idx);
  size_t support = 0, pca = 0;
  for (const auto& [a, b] : pairs) {
    if (idx.pairs[(size_t)head_type].count({a, b})) ++support;
    if (idx.subjects[(size_t)head_type].count(a)) ++pca;
  }
  rule.support = (double)support;
  double head_size = fs.type_sizes[(size_t)head_type];
  rule.head_coverage = head_size > 0.0 ? rule.support / head_size : 0.0;
  rule.confidence = pairs.empty() ? 0.0 : rule.support / (double)pairs.size();
  rule.pca_confidence = pca == 0 ? 0.0 : rule.support / (double)pca;
  return rule;
}

// Closed: every used variable appears at least twice across head and body.
bool is_closed(const std::vector<Atom>& body) {
  std::array<int, 3> uses{1, 1, 0};  // head contributes one use of ?a and ?b
  for (const Atom& a : body) {
    ++uses[a.subj];
    ++uses[a.obj];
  }
  for (int u : uses)
    if (u == 1) return false;
  return true;
}

bool is_connected(const std::vector<Atom>& body) {
  if (body.size() < 2) return true;
  // With one optional fresh variable, disconnection only happens when the
  // atoms share no variable and neither touches the head pair; closedness
  // already forces sharing here, but check directly for clarity.
  const Atom& x = body[0];
  const Atom& y = body[1];
  bool x_head = x.subj < 2 || x.obj < 2;
  bool y_head = y.subj < 2 || y.obj < 2;
  bool share = x.subj == y.subj || x.subj == y.obj || x.obj == y.subj ||
               x.obj == y.obj;
  return (x_head && y_head) || share;
}

std::string rule_key(const HornRule& r) {
  std::vector<std::string> parts;
  for (const Atom& a : r.body) parts.push_back(atom_string(a));
  std::sort(parts.begin(), parts.end());
  std::string key;
  for (const std::string& p : parts) key += p + "&";
  key += atom_string(r.head);
  return key;
}

}  // namespace

HornRule score_rule(const std::vector<Atom>& body, RelType head_type,
                    const FactSet& facts) {
  if (body.empty() || body.size() > 2)
    throw Error("rule body must have 1 or 2 atoms");
  for (const Atom& a : body)
    if (a.subj == a.obj) throw Error("self-loop atoms are not allowed");
  return score_on_index(body, head_type, FactIndex(facts), facts);
}

std::vector<HornRule> mine(const FactSet& facts, MineOptions opts) {
  FactIndex idx(facts);

  std::vector<RelType> present;
  for (size_t i = 0; i < facts.type_sizes.size(); ++i)
    if (facts.type_sizes[i] > 0.0) present.push_back((RelType)i);

  // All syntactically valid atoms over ?a ?b ?f.
  std::vector<Atom> alphabet;
  for (RelType t : present)
    for (int s = 0; s < 3; ++s)
      for (int o = 0; o < 3; ++o)
        if (s != o) alphabet.push_back({s, t, o});

  struct State {
    RelType head;
    std::vector<Atom> body;
  };

  std::vector<HornRule> out;
  std::set<std::string> emitted;
  std::vector<State> queue;
  for (RelType t : present) queue.push_back({t, {}});

  // Breadth-style refinement: every dequeued state grows by one dangling or
  // closing atom; closed states get scored and, when they pass, emitted.
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    State st = queue[qi];
    if ((int)st.body.size() >= opts.max_body) continue;
    for (const Atom& cand : alphabet) {
      if (cand.subj == 0 && cand.obj == 1 && cand.type == st.head)
        continue;  // head atom reappearing in the body
      bool dup = false;
      for (const Atom& a : st.body) dup = dup || a == cand;
      if (dup) continue;

      State next = st;
      next.body.push_back(cand);
      if (!is_connected(next.body)) continue;
      if (is_closed(next.body)) {
        HornRule rule = score_on_index(next.body, next.head, idx, facts);
        std::string key = rule_key(rule);
        if (rule.support > 0.0 && rule.head_coverage >= opts.min_hc &&
            rule.pca_confidence >= opts.min_pca &&
            emitted.insert(key).second)
          out.push_back(rule);
      }
      if ((int)next.body.size() < opts.max_body) queue.push_back(next);
    }
  }

  std::sort(out.begin(), out.end(), [](const HornRule& a, const HornRule& b) {
    if (a.pca_confidence != b.pca_confidence)
      return a.pca_confidence > b.pca_confidence;
    if (a.head_coverage != b.head_coverage)
      return a.head_coverage > b.head_coverage;
    return rule_key(a) < rule_key(b);
  });
  return out;
}

}  // namespace evkg
