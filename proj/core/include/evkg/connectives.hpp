#pragma once

#include <map>
#include <string>
#include <vector>

#include "evkg/types.hpp"

namespace evkg {

// One sense row of the lexicon. `rank` is the ambiguity rank: 1 = primary /
// unambiguous sense; classification picks the lowest rank for a phrase.
struct ConnectiveSense {
  std::string phrase;  // lowercase, space-joined lemmas
  RelType relation = RelType::Conjunction;
  int rank = 1;
};

// A concrete occurrence in a sentence: token span [begin, end] inclusive.
struct ConnectiveOccurrence {
  int begin = 0;
  int end = 0;
  std::string phrase;
  RelType relation = RelType::Conjunction;
  int rank = 1;
  int n_tokens() const { return end - begin + 1; }
};

class ConnectiveLexicon {
 public:
  // Built-in PDTB-style explicit connective table.
  static const ConnectiveLexicon& builtin();

  // TSV rows: phrase<TAB>relation<TAB>rank. '#' comments and blanks skipped.
  static ConnectiveLexicon load_tsv(const std::string& path);
  static ConnectiveLexicon from_rows(std::vector<ConnectiveSense> rows);

  // All non-overlapping occurrences, scanning left to right, longest match
  // first at each position. Matching is on lowercased lemmas.
  std::vector<ConnectiveOccurrence> find(const ParsedSentence& sent) const;

  // Lowest-rank sense for an exact phrase, if listed.
  const ConnectiveSense* sense(const std::string& phrase) const;

  size_t size() const { return senses_.size(); }
  const std::vector<ConnectiveSense>& rows() const { return senses_; }
  int max_phrase_tokens() const { return max_tokens_; }

 private:
  std::vector<ConnectiveSense> senses_;
  std::map<std::string, size_t> best_;  // phrase -> index of lowest-rank sense
  int max_tokens_ = 1;
  void index();
};

}  // namespace evkg
