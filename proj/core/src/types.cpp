#include "evkg/types.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "evkg/error.hpp"

namespace evkg {

Pos pos_from_tag(std::string_view tag, std::string_view lemma) {
  auto starts = [&](std::string_view p) { return tag.substr(0, p.size()) == p; };
  if (starts("NN")) return Pos::Noun;
  if (starts("VB")) return lemma == "be" ? Pos::BeVerb : Pos::Verb;
  if (starts("JJ")) return Pos::Adjective;
  if (tag == "IN" || tag == "TO") return Pos::Preposition;
  if (tag == "PRP" || tag == "PRP$") return Pos::Pronoun;
  // UPOS fallback for CoNLL-U files without Penn tags.
  if (tag == "NOUN" || tag == "PROPN") return Pos::Noun;
  if (tag == "VERB") return lemma == "be" ? Pos::BeVerb : Pos::Verb;
  if (tag == "AUX") return lemma == "be" ? Pos::BeVerb : Pos::Other;
  if (tag == "ADJ") return Pos::Adjective;
  if (tag == "ADP") return Pos::Preposition;
  if (tag == "PRON") return Pos::Pronoun;
  return Pos::Other;
}

const char* pos_code(Pos p) {
  switch (p) {
    case Pos::Noun: return "n";
    case Pos::Verb: return "v";
    case Pos::BeVerb: return "be";
    case Pos::Adjective: return "a";
    case Pos::Preposition: return "p";
    case Pos::Pronoun: return "pr";
    case Pos::Other: return "x";
  }
  return "x";
}

void ParsedSentence::validate(long line) const {
  const int n = static_cast<int>(tokens.size());
  std::vector<int> heads(n, -1);
  for (const auto& e : deps) {
    if (e.gov < 0 || e.gov >= n || e.dep < 0 || e.dep >= n)
      throw ParseError("dependency index out of range", line);
    if (e.gov == e.dep) throw ParseError("dependency self-loop", line);
    if (heads[e.dep] != -1) throw ParseError("token has two governors", line);
    heads[e.dep] = e.gov;
  }
  for (int i = 0; i < n; ++i) {
    if (tokens[i].index != i) throw ParseError("token indices not contiguous", line);
  }
}

int ParsedSentence::head_of(int tok) const {
  for (const auto& e : deps)
    if (e.dep == tok) return e.gov;
  return -1;
}

const DepEdge* ParsedSentence::incoming(int tok) const {
  for (const auto& e : deps)
    if (e.dep == tok) return &e;
  return nullptr;
}

std::vector<const DepEdge*> ParsedSentence::outgoing(int tok) const {
  std::vector<const DepEdge*> out;
  for (const auto& e : deps)
    if (e.gov == tok) out.push_back(&e);
  return out;
}

bool ParsedSentence::is_punct(int tok) const {
  const auto& s = tokens[tok].surface;
  if (s.empty()) return true;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::ispunct(c); });
}

bool Clause::contains(int tok) const {
  return std::binary_search(tokens.begin(), tokens.end(), tok);
}

const std::array<const char*, kRelTypeCount> kRelTypeNames = {
    "Precedence",    "Succession",  "Synchronous", "Reason",
    "Result",        "Condition",   "Contrast",    "Concession",
    "Conjunction",   "Instantiation", "Restatement", "Alternative",
    "ChosenAlternative", "Exception", "Co-Occurrence",
};

const char* rel_name(RelType t) { return kRelTypeNames[static_cast<int>(t)]; }

std::optional<RelType> rel_from_name(std::string_view name) {
  for (int i = 0; i < kRelTypeCount; ++i)
    if (name == kRelTypeNames[i]) return static_cast<RelType>(i);
  // Tolerate the hyphen-free spelling in configs.
  if (name == "CoOccurrence") return RelType::CoOccurrence;
  return std::nullopt;
}

const Token* Eventuality::token_at(int sentence_index) const {
  for (const auto& t : words)
    if (t.index == sentence_index) return &t;
  return nullptr;
}

std::vector<std::string> Eventuality::word_lemmas() const {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const auto& t : words) out.push_back(t.lemma);
  return out;
}

std::vector<std::string> Eventuality::skeleton_lemmas() const {
  std::vector<std::string> out;
  out.reserve(skeleton.size());
  for (int idx : skeleton) {
    const Token* t = token_at(idx);
    out.push_back(t ? t->lemma : "?");
  }
  return out;
}

std::vector<std::string> Eventuality::verb_lemmas() const {
  // Content verbs only: "be" slots are already visible in the pattern code,
  // and listing them would swamp verb lookups with copular eventualities.
  std::vector<std::string> out;
  for (const auto& t : words)
    if (t.pos == Pos::Verb) out.push_back(t.lemma);
  return out;
}

std::set<std::string> Eventuality::lemma_set() const {
  std::set<std::string> out;
  for (const auto& t : words) out.insert(t.lemma);
  return out;
}

int Eventuality::first_token_index() const {
  return words.empty() ? -1 : words.front().index;
}

std::string Eventuality::text() const {
  std::ostringstream os;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i) os << ' ';
    os << words[i].lemma;
  }
  return os.str();
}

}  // namespace evkg
