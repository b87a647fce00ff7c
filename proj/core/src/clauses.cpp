#include "evkg/clauses.hpp"

#include <algorithm>
#include <map>

namespace evkg {

bool is_clause_boundary_label(const std::string& label) {
  return label == "advcl" || label == "ccomp" || label == "csubj" ||
         label == "parataxis";
}

namespace {

bool verbish(const Token& t) {
  // Clause-heading material: verbs plus copular predicates show up as
  // adjectives/nouns, so accept anything that can anchor a pattern.
  return t.pos == Pos::Verb || t.pos == Pos::BeVerb;
}

bool conj_splits(const ParsedSentence& s, const DepEdge& e) {
  if (e.label != "conj") return false;
  return verbish(s.tokens[e.gov]) && verbish(s.tokens[e.dep]);
}

}  // namespace

std::vector<Clause> split_clauses(const ParsedSentence& sent,
                                  const ConnectiveLexicon& lexicon) {
  const int n = static_cast<int>(sent.tokens.size());

  // Token -> nearest clause-heading ancestor (or root marker -1).
  std::vector<int> clause_head(n, -1);
  for (int i = 0; i < n; ++i) {
    int cur = i;
    int guard = 0;
    while (guard++ <= n) {
      const DepEdge* in = sent.incoming(cur);
      if (!in) break;  // reached a root
      if (is_clause_boundary_label(in->label) || conj_splits(sent, *in)) {
        clause_head[i] = cur;
        break;
      }
      cur = in->gov;
    }
  }

  std::map<int, std::vector<int>> groups;  // head -> ascending token indices
  for (int i = 0; i < n; ++i) {
    if (sent.is_punct(i)) continue;
    groups[clause_head[i]].push_back(i);
  }

  // Lexical splits: remove the last token of each connective occurrence and
  // cut its clause at that position.
  std::vector<ConnectiveOccurrence> occs = lexicon.find(sent);
  std::vector<std::vector<int>> parts;
  for (auto& [head, toks] : groups) {
    (void)head;
    std::vector<std::vector<int>> segments = {toks};
    for (const auto& occ : occs) {
      int sep = occ.end;
      std::vector<std::vector<int>> next;
      for (auto& seg : segments) {
        auto it = std::find(seg.begin(), seg.end(), sep);
        if (it == seg.end()) {
          next.push_back(std::move(seg));
          continue;
        }
        std::vector<int> left(seg.begin(), it);
        std::vector<int> right(it + 1, seg.end());
        if (!left.empty()) next.push_back(std::move(left));
        if (!right.empty()) next.push_back(std::move(right));
      }
      segments = std::move(next);
    }
    for (auto& seg : segments)
      if (!seg.empty()) parts.push_back(std::move(seg));
  }

  std::sort(parts.begin(), parts.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  std::vector<Clause> out;
  for (size_t i = 0; i < parts.size(); ++i)
    out.push_back({static_cast<int>(i), std::move(parts[i])});
  return out;
}

}  // namespace evkg
