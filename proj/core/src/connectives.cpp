#include "evkg/connectives.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "evkg/error.hpp"

namespace evkg {
namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Default explicit-connective table, PDTB-derived. One default sense per
// phrase; rank encodes how ambiguous the phrase is in the wild (1 = clean).
// Kept in sync with core/data/connectives.tsv (tests diff the two).
struct Row { const char* phrase; RelType rel; int rank; };
const Row kDefault[] = {
    {"before", RelType::Precedence, 1},
    {"then", RelType::Precedence, 2},
    {"later", RelType::Precedence, 1},
    {"afterwards", RelType::Precedence, 1},
    {"afterward", RelType::Precedence, 1},
    {"subsequently", RelType::Precedence, 1},
    {"thereafter", RelType::Precedence, 1},
    {"next", RelType::Precedence, 2},
    {"until", RelType::Precedence, 1},
    {"eventually", RelType::Precedence, 1},
    {"finally", RelType::Precedence, 1},
    {"ultimately", RelType::Precedence, 1},
    {"in the end", RelType::Precedence, 1},
    {"soon", RelType::Precedence, 2},
    {"after", RelType::Succession, 1},
    {"once", RelType::Succession, 2},
    {"earlier", RelType::Succession, 1},
    {"previously", RelType::Succession, 1},
    {"as soon as", RelType::Succession, 1},
    {"meanwhile", RelType::Synchronous, 1},
    {"meantime", RelType::Synchronous, 1},
    {"in the meantime", RelType::Synchronous, 1},
    {"simultaneously", RelType::Synchronous, 1},
    {"at the same time", RelType::Synchronous, 1},
    {"when", RelType::Synchronous, 2},
    {"as", RelType::Synchronous, 3},
    {"because", RelType::Reason, 1},
    {"since", RelType::Reason, 2},
    {"now that", RelType::Reason, 1},
    {"so", RelType::Result, 2},
    {"so that", RelType::Result, 1},
    {"thus", RelType::Result, 1},
    {"therefore", RelType::Result, 1},
    {"hence", RelType::Result, 1},
    {"as a result", RelType::Result, 1},
    {"as a consequence", RelType::Result, 1},
    {"consequently", RelType::Result, 1},
    {"accordingly", RelType::Result, 1},
    {"thereby", RelType::Result, 1},
    {"if", RelType::Condition, 1},
    {"if only", RelType::Condition, 1},
    {"only if", RelType::Condition, 1},
    {"as long as", RelType::Condition, 1},
    {"provided that", RelType::Condition, 1},
    {"in case", RelType::Condition, 1},
    {"even if", RelType::Condition, 2},
    {"but", RelType::Contrast, 1},
    {"however", RelType::Contrast, 1},
    {"by contrast", RelType::Contrast, 1},
    {"by comparison", RelType::Contrast, 1},
    {"in contrast", RelType::Contrast, 1},
    {"on the other hand", RelType::Contrast, 1},
    {"on the contrary", RelType::Contrast, 1},
    {"conversely", RelType::Contrast, 1},
    {"whereas", RelType::Contrast, 1},
    {"while", RelType::Contrast, 2},
    {"yet", RelType::Contrast, 2},
    {"although", RelType::Concession, 1},
    {"though", RelType::Concession, 2},
    {"even though", RelType::Concession, 1},
    {"even so", RelType::Concession, 1},
    {"nevertheless", RelType::Concession, 1},
    {"nonetheless", RelType::Concession, 1},
    {"still", RelType::Concession, 3},
    {"and", RelType::Conjunction, 2},
    {"also", RelType::Conjunction, 1},
    {"in addition", RelType::Conjunction, 1},
    {"additionally", RelType::Conjunction, 1},
    {"moreover", RelType::Conjunction, 1},
    {"furthermore", RelType::Conjunction, 1},
    {"further", RelType::Conjunction, 2},
    {"besides", RelType::Conjunction, 1},
    {"plus", RelType::Conjunction, 2},
    {"as well", RelType::Conjunction, 1},
    {"likewise", RelType::Conjunction, 1},
    {"similarly", RelType::Conjunction, 1},
    {"in turn", RelType::Conjunction, 1},
    {"for example", RelType::Instantiation, 1},
    {"for instance", RelType::Instantiation, 1},
    {"in other words", RelType::Restatement, 1},
    {"that is", RelType::Restatement, 2},
    {"in fact", RelType::Restatement, 1},
    {"indeed", RelType::Restatement, 1},
    {"in particular", RelType::Restatement, 1},
    {"specifically", RelType::Restatement, 1},
    {"in short", RelType::Restatement, 1},
    {"in sum", RelType::Restatement, 1},
    {"clearly", RelType::Restatement, 2},
    {"or", RelType::Alternative, 1},
    {"or else", RelType::Alternative, 1},
    {"alternatively", RelType::Alternative, 1},
    {"otherwise", RelType::Alternative, 1},
    {"either", RelType::Alternative, 2},
    {"instead", RelType::ChosenAlternative, 1},
    {"rather", RelType::ChosenAlternative, 2},
    {"rather than", RelType::ChosenAlternative, 1},
    {"instead of", RelType::ChosenAlternative, 1},
    {"unless", RelType::Exception, 1},
    {"except", RelType::Exception, 1},
    {"except that", RelType::Exception, 1},
    {"other than", RelType::Exception, 2},
};

}  // namespace

const ConnectiveLexicon& ConnectiveLexicon::builtin() {
  static const ConnectiveLexicon lex = [] {
    std::vector<ConnectiveSense> rows;
    for (const auto& r : kDefault)
      rows.push_back({r.phrase, r.rel, r.rank});
    return ConnectiveLexicon::from_rows(std::move(rows));
  }();
  return lex;
}

ConnectiveLexicon ConnectiveLexicon::from_rows(std::vector<ConnectiveSense> rows) {
  ConnectiveLexicon lex;
  lex.senses_ = std::move(rows);
  lex.index();
  return lex;
}

ConnectiveLexicon ConnectiveLexicon::load_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open connective lexicon: " + path);
  std::vector<ConnectiveSense> rows;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string phrase, rel, rank;
    if (!std::getline(ls, phrase, '\t') || !std::getline(ls, rel, '\t'))
      throw ParseError("connective row needs phrase<TAB>relation", line_no);
    std::getline(ls, rank, '\t');
    auto r = rel_from_name(rel);
    if (!r) throw ParseError("unknown relation type '" + rel + "'", line_no);
    int rk = 1;
    if (!rank.empty()) {
      try {
        rk = std::stoi(rank);
      } catch (...) {
        throw ParseError("bad rank '" + rank + "'", line_no);
      }
    }
    rows.push_back({lower(phrase), *r, rk});
  }
  return from_rows(std::move(rows));
}

void ConnectiveLexicon::index() {
  best_.clear();
  max_tokens_ = 1;
  for (size_t i = 0; i < senses_.size(); ++i) {
    const auto& s = senses_[i];
    int toks = 1 + static_cast<int>(std::count(s.phrase.begin(), s.phrase.end(), ' '));
    max_tokens_ = std::max(max_tokens_, toks);
    auto it = best_.find(s.phrase);
    if (it == best_.end() || senses_[it->second].rank > s.rank)
      best_[s.phrase] = i;
  }
}

const ConnectiveSense* ConnectiveLexicon::sense(const std::string& phrase) const {
  auto it = best_.find(lower(phrase));
  return it == best_.end() ? nullptr : &senses_[it->second];
}

std::vector<ConnectiveOccurrence> ConnectiveLexicon::find(
    const ParsedSentence& sent) const {
  const int n = static_cast<int>(sent.tokens.size());
  std::vector<ConnectiveOccurrence> out;
  int i = 0;
  while (i < n) {
    if (sent.is_punct(i)) {
      ++i;
      continue;
    }
    bool matched = false;
    int longest = std::min(max_tokens_, n - i);
    for (int len = longest; len >= 1; --len) {
      std::string phrase;
      bool ok = true;
      for (int k = 0; k < len; ++k) {
        if (sent.is_punct(i + k)) {  // phrases never span punctuation
          ok = false;
          break;
        }
        if (k) phrase += ' ';
        phrase += lower(sent.tokens[i + k].lemma);
      }
      if (!ok) continue;
      const ConnectiveSense* s = sense(phrase);
      if (s) {
        out.push_back({i, i + len - 1, s->phrase, s->relation, s->rank});
        i += len;
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }
  return out;
}

}  // namespace evkg
