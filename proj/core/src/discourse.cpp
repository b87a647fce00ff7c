#include "evkg/discourse.hpp"

#include <algorithm>
#include <cctype>

#include "evkg/error.hpp"

namespace evkg {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = (char)std::tolower((unsigned char)c);
  return s;
}

bool has_verb(const ParsedSentence& sent, const std::vector<int>& span) {
  for (int t : span) {
    Pos p = sent.tokens[t].pos;
    if (p == Pos::Verb || p == Pos::BeVerb) return true;
  }
  return false;
}

std::vector<int> non_punct_range(const ParsedSentence& sent, int begin, int end) {
  std::vector<int> out;
  for (int t = begin; t < end; ++t)
    if (!sent.is_punct(t)) out.push_back(t);
  return out;
}

// Token indices of the subtree rooted at `root`, clamped to `allowed`.
std::vector<int> subtree_in(const ParsedSentence& sent, int root,
                            const std::set<int>& allowed) {
  std::vector<int> out, stack{root};
  std::set<int> seen;
  while (!stack.empty()) {
    int t = stack.back();
    stack.pop_back();
    if (!seen.insert(t).second) continue;
    if (allowed.count(t)) out.push_back(t);
    for (const DepEdge* e : sent.outgoing(t)) stack.push_back(e->dep);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::set<std::string> span_lemmas(const ParsedSentence& sent,
                                  const std::vector<int>& span) {
  std::set<std::string> out;
  for (int t : span) out.insert(lower(sent.tokens[t].lemma));
  return out;
}

std::set<std::string> ev_lemmas(const Eventuality& ev) {
  std::set<std::string> out;
  for (const Token& w : ev.words) out.insert(lower(w.lemma));
  return out;
}

std::vector<const Eventuality*> match_span(
    const std::vector<Eventuality>& evs, const std::set<std::string>& span,
    double threshold) {
  std::vector<const Eventuality*> out;
  if (span.empty()) return out;
  for (const Eventuality& ev : evs) {
    std::set<std::string> el = ev_lemmas(ev);
    if (el.empty()) continue;
    if (simpson(span, el) >= threshold) out.push_back(&ev);
  }
  return out;
}

}  // namespace

double simpson(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() || b.empty())
    throw Error("simpson: empty lemma set");
  size_t inter = 0;
  for (const std::string& s : a) inter += b.count(s);
  return (double)inter / (double)std::min(a.size(), b.size());
}

std::vector<ConnectiveOccurrence> detect_connectives(
    const ParsedSentence& sent, const ConnectiveLexicon& lexicon) {
  return lexicon.find(sent);
}

std::vector<int> strip_attribution(const ParsedSentence& sent,
                                   std::vector<int> span) {
  // "I'm sure we could find ..." should yield only the complement clause, so
  // while the span still contains a ccomp edge, keep just the complement
  // subtree. Nested attributions peel off one layer per round.
  for (;;) {
    std::set<int> in(span.begin(), span.end());
    int comp = -1;
    for (const DepEdge& e : sent.deps) {
      if (e.label != "ccomp") continue;
      if (!in.count(e.gov) || !in.count(e.dep)) continue;
      if (comp < 0 || e.dep < comp) comp = e.dep;
    }
    if (comp < 0) break;
    std::vector<int> kept = subtree_in(sent, comp, in);
    if (kept.size() >= span.size() || !has_verb(sent, kept)) break;
    span = std::move(kept);
  }
  return span;
}

std::optional<Arguments> extract_arguments(const ParsedSentence& cur,
                                           const ParsedSentence* prev,
                                           const ConnectiveOccurrence& occ) {
  const int n = (int)cur.tokens.size();
  int first = 0;
  while (first < n && cur.is_punct(first)) ++first;

  Arguments args;
  args.occ = occ;

  if (occ.begin > first) {
    // Medial: text before the connective vs text after it.
    args.a1 = non_punct_range(cur, first, occ.begin);
    args.a2 = non_punct_range(cur, occ.end + 1, n);
  } else {
    // Sentence-initial. A verb between the connective and the first comma
    // means the sentence itself holds both arguments ("Because it rains, I
    // stay"); otherwise the connective points back at the previous sentence.
    int comma = -1;
    for (int t = occ.end + 1; t < n; ++t) {
      if (cur.tokens[t].surface == ",") {
        comma = t;
        break;
      }
    }
    std::vector<int> pre =
        non_punct_range(cur, occ.end + 1, comma < 0 ? n : comma);
    if (comma >= 0 && has_verb(cur, pre)) {
      args.a2 = std::move(pre);
      args.a1 = non_punct_range(cur, comma + 1, n);
    } else {
      if (!prev) return std::nullopt;
      args.ps = true;
      args.a1 = non_punct_range(*prev, 0, (int)prev->tokens.size());
      args.a2 = non_punct_range(cur, occ.end + 1, n);
    }
  }

  const ParsedSentence& a1_sent = args.ps ? *prev : cur;
  args.a1 = strip_attribution(a1_sent, std::move(args.a1));
  args.a2 = strip_attribution(cur, std::move(args.a2));
  if (!has_verb(a1_sent, args.a1) || !has_verb(cur, args.a2))
    return std::nullopt;
  return args;
}

DiscourseResult emit_relations(const ParsedSentence& cur,
                               const std::vector<Eventuality>& cur_evs,
                               const ParsedSentence* prev,
                               const std::vector<Eventuality>* prev_evs,
                               const ConnectiveLexicon& lexicon,
                               double simpson_threshold) {
  DiscourseResult res;
  for (const ConnectiveOccurrence& occ : detect_connectives(cur, lexicon)) {
    std::optional<Arguments> args = extract_arguments(cur, prev, occ);
    if (!args) continue;

    const ParsedSentence& a1_sent = args->ps ? *prev : cur;
    const std::vector<Eventuality>& head_pool =
        args->ps ? (prev_evs ? *prev_evs : cur_evs) : cur_evs;
    if (args->ps && !prev_evs) continue;

    std::vector<const Eventuality*> heads = match_span(
        head_pool, span_lemmas(a1_sent, args->a1), simpson_threshold);
    std::vector<const Eventuality*> tails =
        match_span(cur_evs, span_lemmas(cur, args->a2), simpson_threshold);
    if (heads.empty() || tails.empty()) continue;

    double w = 1.0 / ((double)heads.size() * (double)tails.size());
    for (const Eventuality* h : heads) {
      for (const Eventuality* t : tails) {
        RelationInstance inst;
        inst.head_eid = h->eid;
        inst.tail_eid = t->eid;
        inst.type = occ.relation;
        inst.weight = w;
        inst.prov = {cur.doc_id, cur.para_id, cur.sent_id, occ.phrase};
        res.instances.push_back(std::move(inst));
        res.linked.insert(h->eid < t->eid
                              ? std::make_pair(h->eid, t->eid)
                              : std::make_pair(t->eid, h->eid));
      }
    }
  }
  return res;
}

std::vector<RelationInstance> emit_cooccurrence(
    const ParsedSentence& cur, const std::vector<Eventuality>& cur_evs,
    const std::set<std::pair<std::string, std::string>>& linked) {
  std::vector<const Eventuality*> order;
  for (const Eventuality& ev : cur_evs) order.push_back(&ev);
  std::sort(order.begin(), order.end(),
            [](const Eventuality* a, const Eventuality* b) {
              int fa = a->first_token_index(), fb = b->first_token_index();
              if (fa != fb) return fa < fb;
              return a->eid < b->eid;
            });

  std::vector<RelationInstance> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (size_t i = 0; i < order.size(); ++i) {
    for (size_t j = i + 1; j < order.size(); ++j) {
      const std::string& a = order[i]->eid;
      const std::string& b = order[j]->eid;
      if (a == b) continue;
      auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
      if (linked.count(key) || !seen.insert(key).second) continue;
      RelationInstance inst;
      inst.head_eid = a;
      inst.tail_eid = b;
      inst.type = RelType::CoOccurrence;
      inst.weight = 1.0;
      inst.prov = {cur.doc_id, cur.para_id, cur.sent_id, ""};
      out.push_back(std::move(inst));
    }
  }
  return out;
}

}  // namespace evkg
