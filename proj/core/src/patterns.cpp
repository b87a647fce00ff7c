#include "evkg/patterns.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "evkg/error.hpp"
#include "evkg/ids.hpp"

namespace evkg {

const std::array<const char*, 6> kOptionalLabels = {
    "advmod", "amod", "nummod", "aux", "compound", "neg"};
const std::array<const char*, 6> kIgnoredLabels = {
    "det", "punct", "case", "mark", "cc", "poss"};

bool is_optional_label(const std::string& label) {
  return std::find(kOptionalLabels.begin(), kOptionalLabels.end(), label) !=
         kOptionalLabels.end();
}

bool is_ignored_label(const std::string& label) {
  return std::find(kIgnoredLabels.begin(), kIgnoredLabels.end(), label) !=
         kIgnoredLabels.end();
}

namespace {

SlotClass class_of_slot(const std::string& name) {
  if (name == "be") return SlotClass::Be;
  if (name == "there") return SlotClass::There;
  switch (name[0]) {
    case 'n': return SlotClass::N;
    case 'v': return SlotClass::V;
    case 'a': return SlotClass::A;
    default: throw Error("bad pattern slot name '" + name + "'");
  }
}

bool token_fits(const Token& t, SlotClass cls) {
  switch (cls) {
    case SlotClass::N: return t.pos == Pos::Noun || t.pos == Pos::Pronoun;
    case SlotClass::V: return t.pos == Pos::Verb;
    case SlotClass::Be: return t.pos == Pos::BeVerb;
    case SlotClass::A: return t.pos == Pos::Adjective;
    case SlotClass::There: return t.lemma == "there";
  }
  return false;
}

// Structure chains are written in surface order, so edge direction depends on
// the label and the slot classes:
//   nsubj/nsubjpass: the be slot governs if present (there-be-o), otherwise
//     the left element is the subject (dependent);
//   expl: the "there" slot is the dependent;
//   cop: the be slot is the dependent;
//   anything else: left governs right.
struct ChainParser {
  const std::string& code;
  std::vector<PatternSlot> slots;
  std::vector<PatternEdge> edges;
  std::map<std::string, int> index;

  int slot_id(const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(slots.size());
    slots.push_back({name, class_of_slot(name)});
    index[name] = id;
    return id;
  }

  void add_edge(int left, const std::string& label, int right) {
    int gov = left, dep = right;
    SlotClass lc = slots[left].cls, rc = slots[right].cls;
    if (label == "nsubj" || label == "nsubjpass") {
      if (lc == SlotClass::Be) {
        gov = left; dep = right;
      } else if (rc == SlotClass::Be) {
        gov = right; dep = left;
      } else {
        gov = right; dep = left;
      }
    } else if (label == "expl") {
      if (lc == SlotClass::There) { gov = right; dep = left; }
      else { gov = left; dep = right; }
    } else if (label == "cop") {
      if (rc == SlotClass::Be) { gov = left; dep = right; }
      else { gov = right; dep = left; }
    }
    edges.push_back({gov, label, dep});
  }

  // Splits on '-' at depth 0, keeping parenthesized groups whole.
  static std::vector<std::string> tokenize(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == '-' && depth == 0) {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  }

  // Returns the connection point (slot id) of the parsed element.
  int parse_element(const std::string& elem) {
    if (!elem.empty() && elem.front() == '(') {
      return parse_chain(elem.substr(1, elem.size() - 2));
    }
    return slot_id(elem);
  }

  // Parses "e0-l1-e1-l2-e2..."; returns the head (first element's point).
  int parse_chain(const std::string& chain) {
    auto toks = tokenize(chain);
    if (toks.empty() || toks.size() % 2 == 0)
      throw Error("malformed pattern structure for " + code);
    int head = parse_element(toks[0]);
    int prev = head;
    for (size_t i = 1; i + 1 < toks.size(); i += 2) {
      const std::string& label = toks[i];
      int next = parse_element(toks[i + 1]);
      add_edge(prev, label, next);
      prev = next;
      // groups chain from their head, plain slots from themselves; since
      // parse_element returns the head either way, prev is already right
      // for groups ("(v1-iobj-n2)-dobj-n3" hangs dobj off v1).
    }
    return head;
  }
};

}  // namespace

Pattern parse_pattern(const std::string& code, const std::string& structure,
                      const std::string& example) {
  ChainParser p{code};
  p.parse_chain(structure);
  Pattern pat;
  pat.code = code;
  pat.structure = structure;
  pat.example = example;
  pat.slots = std::move(p.slots);
  pat.edges = std::move(p.edges);
  pat.anchor = -1;
  for (size_t i = 0; i < pat.slots.size(); ++i) {
    if (pat.slots[i].cls == SlotClass::V) {
      pat.anchor = static_cast<int>(i);
      break;
    }
  }
  if (pat.anchor < 0) {
    for (size_t i = 0; i < pat.slots.size(); ++i)
      if (pat.slots[i].cls == SlotClass::Be) {
        pat.anchor = static_cast<int>(i);
        break;
      }
  }
  if (pat.anchor < 0) throw Error("pattern " + code + " has no verb-like anchor");
  return pat;
}

PatternTable PatternTable::from_rows(
    const std::vector<std::array<std::string, 3>>& rows) {
  PatternTable t;
  for (const auto& r : rows) t.patterns_.push_back(parse_pattern(r[0], r[1], r[2]));
  return t;
}

PatternTable PatternTable::load_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open pattern table: " + path);
  std::vector<std::array<std::string, 3>> rows;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::array<std::string, 3> r;
    if (!std::getline(ls, r[0], '\t') || !std::getline(ls, r[1], '\t'))
      throw ParseError("pattern row needs code<TAB>structure", line_no);
    std::getline(ls, r[2], '\t');
    rows.push_back(std::move(r));
  }
  return from_rows(rows);
}

const PatternTable& PatternTable::builtin() {
  static const PatternTable t = from_rows({
      {"s-v", "n1-nsubj-v1", "The dog barks"},
      {"s-v-o", "n1-nsubj-v1-dobj-n2", "I love you"},
      {"s-v-a", "n1-nsubj-v1-xcomp-a", "He felt ill"},
      {"s-v-v", "n1-nsubj-v1-xcomp-v2", "I want to go"},
      {"s-v-o-o", "n1-nsubj-(v1-iobj-n2)-dobj-n3", "You give me the book"},
      {"s-v-v-o", "n1-nsubj-v1-xcomp-v2-dobj-n2", "I want to eat the apple"},
      {"s-v-o-v-o", "n1-nsubj-(v1-dobj-n2)-xcomp-v2-dobj-n3",
       "I ask you to help us"},
      {"s-v-o-v-o-o", "n1-nsubj-(v1-dobj-n2)-xcomp-(v2-iobj-n3)-dobj-n4",
       "president urges the congress to make her citizen"},
      {"s-be-a", "n1-nsubj-a1-cop-be", "The dog is cute"},
      {"s-be-o", "n1-nsubj-n2-cop-be", "He is a boy"},
      {"s-v-be-o", "n1-nsubj-v1-xcomp-n2-cop-be", "I want to be a hero"},
      {"s-v-be-a", "n1-nsubj-v1-xcomp-a1-cop-be", "I want to be slim"},
      {"s-v-o-be-o", "n1-nsubj-(v1-iobj-n2)-xcomp-n3-cop-be",
       "I want her to be hero"},
      {"s-v-o-be-a", "n1-nsubj-(v1-iobj-n2)-xcomp-a1-cop-be",
       "I want her to be happy"},
      {"there-be-o", "there-expl-be-nsubj-n1", "There is an apple"},
      {"spass-v", "n1-nsubjpass-v1", "The bill is paid"},
      {"spass-v-o", "n1-nsubjpass-v1-dobj-n2", "He is served water"},
      {"spass-v-v-o", "n1-nsubjpass-v1-xcomp-v2-dobj-n2",
       "He is asked to help us"},
  });
  return t;
}

const Pattern* PatternTable::by_code(const std::string& code) const {
  for (const auto& p : patterns_)
    if (p.code == code) return &p;
  return nullptr;
}

std::vector<DepEdge> clause_subgraph(const ParsedSentence& sent,
                                     const Clause& clause) {
  std::vector<DepEdge> out;
  for (const auto& e : sent.deps)
    if (clause.contains(e.gov) && clause.contains(e.dep)) out.push_back(e);
  return out;
}

std::optional<Eventuality> match_one(const ParsedSentence& sent,
                                     const Clause& clause,
                                     const std::vector<DepEdge>& clause_deps,
                                     int anchor, const Pattern& pat) {
  const int n_slots = static_cast<int>(pat.slots.size());
  if (!token_fits(sent.tokens[anchor], pat.slots[pat.anchor].cls)) return std::nullopt;

  std::vector<int> bind(n_slots, -1);
  bind[pat.anchor] = anchor;

  auto bound_to_slot = [&](int tok) {
    return std::find(bind.begin(), bind.end(), tok) != bind.end();
  };

  // Bind positive edges: repeatedly resolve any pattern edge with exactly one
  // bound endpoint; candidates take the smallest token index. An edge whose
  // endpoints are both bound must exist in the clause graph.
  std::vector<bool> edge_done(pat.edges.size(), false);
  std::vector<char> dep_used(clause_deps.size(), 0);
  bool progress = true;
  int remaining = static_cast<int>(pat.edges.size());
  while (remaining > 0 && progress) {
    progress = false;
    for (size_t pe = 0; pe < pat.edges.size(); ++pe) {
      if (edge_done[pe]) continue;
      const auto& edge = pat.edges[pe];
      int gb = bind[edge.gov], db = bind[edge.dep];
      if (gb < 0 && db < 0) continue;
      if (gb >= 0 && db >= 0) {
        bool found = false;
        for (size_t i = 0; i < clause_deps.size(); ++i) {
          const auto& d = clause_deps[i];
          if (!dep_used[i] && d.gov == gb && d.dep == db && d.label == edge.label) {
            dep_used[i] = 1;
            found = true;
            break;
          }
        }
        if (!found) return std::nullopt;
      } else if (gb >= 0) {
        int best = -1, best_i = -1;
        for (size_t i = 0; i < clause_deps.size(); ++i) {
          const auto& d = clause_deps[i];
          if (dep_used[i] || d.gov != gb || d.label != edge.label) continue;
          if (!token_fits(sent.tokens[d.dep], pat.slots[edge.dep].cls)) continue;
          if (bound_to_slot(d.dep)) continue;
          if (best < 0 || d.dep < best) { best = d.dep; best_i = static_cast<int>(i); }
        }
        if (best < 0) return std::nullopt;
        bind[edge.dep] = best;
        dep_used[best_i] = 1;
      } else {
        int best = -1, best_i = -1;
        for (size_t i = 0; i < clause_deps.size(); ++i) {
          const auto& d = clause_deps[i];
          if (dep_used[i] || d.dep != db || d.label != edge.label) continue;
          if (!token_fits(sent.tokens[d.gov], pat.slots[edge.gov].cls)) continue;
          if (bound_to_slot(d.gov)) continue;
          if (best < 0 || d.gov < best) { best = d.gov; best_i = static_cast<int>(i); }
        }
        if (best < 0) return std::nullopt;
        bind[edge.gov] = best;
        dep_used[best_i] = 1;
      }
      edge_done[pe] = true;
      --remaining;
      progress = true;
    }
  }
  if (remaining > 0) return std::nullopt;  // disconnected pattern (can't happen)

  // Optional consumption: modifiers hanging off any included word, recursively.
  std::set<int> included(bind.begin(), bind.end());
  std::vector<size_t> consumed_optional;
  bool grew = true;
  while (grew) {
    grew = false;
    for (size_t i = 0; i < clause_deps.size(); ++i) {
      if (dep_used[i]) continue;
      const auto& d = clause_deps[i];
      if (is_optional_label(d.label) && included.count(d.gov) &&
          !included.count(d.dep)) {
        included.insert(d.dep);
        dep_used[i] = 1;
        consumed_optional.push_back(i);
        grew = true;
      }
    }
  }

  // Negative rule: any leftover non-ignored edge touching the eventuality
  // disqualifies it. This is what keeps "I have a book" out of s-v.
  for (size_t i = 0; i < clause_deps.size(); ++i) {
    if (dep_used[i]) continue;
    const auto& d = clause_deps[i];
    if (is_ignored_label(d.label)) continue;
    if (included.count(d.gov) || included.count(d.dep)) return std::nullopt;
  }

  Eventuality ev;
  ev.pattern = pat.code;
  ev.doc_id = sent.doc_id;
  ev.para_id = sent.para_id;
  ev.sent_id = sent.sent_id;
  ev.skeleton.assign(bind.begin(), bind.end());
  std::sort(ev.skeleton.begin(), ev.skeleton.end());
  for (int tok : included) ev.words.push_back(sent.tokens[tok]);
  std::sort(ev.words.begin(), ev.words.end(),
            [](const Token& a, const Token& b) { return a.index < b.index; });
  for (size_t pe = 0; pe < pat.edges.size(); ++pe) {
    const auto& edge = pat.edges[pe];
    ev.edges.push_back({bind[edge.gov], edge.label, bind[edge.dep]});
  }
  for (size_t i : consumed_optional) ev.edges.push_back(clause_deps[i]);
  std::sort(ev.edges.begin(), ev.edges.end());
  return ev;
}

std::vector<Eventuality> extract_all(const ParsedSentence& sent,
                                     const std::vector<Clause>& clauses,
                                     const PatternTable& table) {
  std::vector<Eventuality> out;
  for (const auto& clause : clauses) {
    std::vector<DepEdge> deps = clause_subgraph(sent, clause);
    std::set<int> taken;  // tokens already inside an eventuality of this clause
    for (int tok : clause.tokens) {
      const Token& t = sent.tokens[tok];
      if (t.pos != Pos::Verb && t.pos != Pos::BeVerb) continue;
      if (taken.count(tok)) continue;
      for (const auto& pat : table.patterns()) {
        auto ev = match_one(sent, clause, deps, tok, pat);
        if (!ev) continue;
        ev->canonical = eventuality_canonical(*ev);
        ev->eid = digest128(ev->canonical);
        for (const auto& w : ev->words) taken.insert(w.index);
        out.push_back(std::move(*ev));
        break;
      }
    }
  }
  return out;
}

}  // namespace evkg
