#include "evkg/conceptualize.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "evkg/error.hpp"

namespace evkg {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = (char)std::tolower((unsigned char)c);
  return s;
}

const char* kPersonNames[] = {"PersonX", "PersonY", "PersonZ"};

std::string person_name(size_t index) {
  if (index < 3) return kPersonNames[index];
  return "Person" + std::to_string(index + 1);
}

}  // namespace

bool is_person_pronoun(const std::string& lemma) {
  std::string l = lower(lemma);
  return l != "it" && l != "its" && l != "itself";
}

IsATable IsATable::load_tsv(const std::string& path, int top_k) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  IsATable table;
  bool counts = false;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string term, concept_word, value;
    if (!std::getline(row, term, '\t') ||
        !std::getline(row, concept_word, '\t') ||
        !std::getline(row, value, '\t'))
      throw ParseError("expected child<TAB>concept<TAB>value", lineno);
    double v = 0.0;
    try {
      v = std::stod(value);
    } catch (const std::exception&) {
      throw ParseError("bad value '" + value + "'", lineno);
    }
    if (v <= 0.0) throw ParseError("value must be positive", lineno);
    if (v > 1.0) counts = true;
    table.add(term, concept_word, v);
  }
  table.finalize(top_k, counts);
  return table;
}

IsATable IsATable::from_rows(
    const std::vector<std::tuple<std::string, std::string, double>>& rows,
    int top_k) {
  IsATable table;
  bool counts = false;
  for (const auto& [term, concept_word, v] : rows) {
    if (v <= 0.0) throw Error("IsA value must be positive");
    if (v > 1.0) counts = true;
    table.add(term, concept_word, v);
  }
  table.finalize(top_k, counts);
  return table;
}

void IsATable::add(const std::string& term, const std::string& concept_word,
                   double value) {
  entries_[lower(term)].push_back({concept_word, value});
}

void IsATable::finalize(int top_k, bool counts) {
  for (auto& [term, list] : entries_) {
    if (counts) {
      double sum = 0.0;
      for (const IsAEntry& e : list) sum += e.prob;
      for (IsAEntry& e : list) e.prob /= sum;
    }
    std::sort(list.begin(), list.end(), [](const IsAEntry& a, const IsAEntry& b) {
      if (a.prob != b.prob) return a.prob > b.prob;
      return a.concept_word < b.concept_word;
    });
    if ((int)list.size() > top_k) list.resize(top_k);
  }
}

const std::vector<IsAEntry>* IsATable::lookup(const std::string& term) const {
  auto it = entries_.find(lower(term));
  return it == entries_.end() ? nullptr : &it->second;
}

Conceptualizer::Conceptualizer(IsATable table, ConceptualizeOptions opts)
    : table_(std::move(table)), opts_(opts) {}

std::vector<TokenConceptualization> Conceptualizer::conceptualize_token(
    const Token& tok) const {
  std::vector<TokenConceptualization> out;
  if (tok.pos != Pos::Noun && tok.pos != Pos::Pronoun) return out;
  if (tok.ner != "none") {
    out.push_back({tok.lemma, tok.ner, 1.0});
    return out;
  }
  if (tok.pos == Pos::Pronoun) {
    if (is_person_pronoun(tok.lemma))
      out.push_back({tok.lemma, person_name(0), 1.0});
    return out;
  }
  if (const std::vector<IsAEntry>* hits = table_.lookup(tok.lemma))
    for (const IsAEntry& e : *hits)
      out.push_back({tok.lemma, e.concept_word, e.prob});
  return out;
}

std::vector<TokenConceptualization> Conceptualizer::skeleton_token_options(
    const EventualityRecord& rec, size_t skel_pos,
    std::map<std::string, std::string>& person_names) const {
  int k = rec.skel[skel_pos];
  const std::string& lemma = rec.words[k];
  const std::string& pos = rec.pos[k];
  const std::string& ner = rec.ner[k];

  if (pos == "n" || pos == "pr") {
    if (ner != "none") return {{lemma, ner, 1.0}};
    if (pos == "pr") {
      if (is_person_pronoun(lemma)) {
        auto [it, fresh] =
            person_names.try_emplace(lower(lemma), person_name(person_names.size()));
        (void)fresh;
        return {{lemma, it->second, 1.0}};
      }
      return {{lemma, lemma, 1.0}};
    }
    // Regular noun: prefer the whole compound phrase, fall back to the head.
    std::string phrase;
    for (size_t j = 0; j < rec.words.size(); ++j) {
      if ((int)j == k) continue;
      for (const auto& d : rec.deps) {
        if (d[1] == "compound" && d[0] == lemma && d[2] == rec.words[j]) {
          if (!phrase.empty()) phrase += ' ';
          phrase += rec.words[j];
          break;
        }
      }
    }
    if (!phrase.empty()) {
      phrase += ' ';
      phrase += lemma;
      if (const std::vector<IsAEntry>* hits = table_.lookup(phrase)) {
        std::vector<TokenConceptualization> out;
        for (const IsAEntry& e : *hits)
          out.push_back({phrase, e.concept_word, e.prob});
        return out;
      }
    }
    if (const std::vector<IsAEntry>* hits = table_.lookup(lemma)) {
      std::vector<TokenConceptualization> out;
      for (const IsAEntry& e : *hits)
        out.push_back({lemma, e.concept_word, e.prob});
      return out;
    }
  }
  return {{lemma, lemma, 1.0}};
}

std::vector<ConceptOption> Conceptualizer::conceptualize_record(
    const EventualityRecord& rec) const {
  std::map<std::string, std::string> person_names;
  std::vector<ConceptOption> acc{{{}, 1.0}};
  for (size_t s = 0; s < rec.skel.size(); ++s) {
    std::vector<TokenConceptualization> opts =
        skeleton_token_options(rec, s, person_names);
    std::vector<ConceptOption> next;
    next.reserve(acc.size() * opts.size());
    for (const ConceptOption& base : acc) {
      for (const TokenConceptualization& tc : opts) {
        ConceptOption ext = base;
        ext.words.push_back(tc.concept_word);
        ext.prob *= tc.prob;
        next.push_back(std::move(ext));
      }
    }
    acc = std::move(next);
  }

  // The product can hit one concept through several token combinations;
  // their probabilities add up.
  std::map<std::vector<std::string>, double> merged;
  for (ConceptOption& opt : acc) merged[std::move(opt.words)] += opt.prob;

  std::vector<ConceptOption> out;
  for (auto& [words, prob] : merged) {
    if (prob < opts_.min_concept_prob) continue;
    out.push_back({words, prob});
  }
  std::sort(out.begin(), out.end(), [](const ConceptOption& a, const ConceptOption& b) {
    if (a.prob != b.prob) return a.prob > b.prob;
    return a.words < b.words;
  });
  if (out.size() > opts_.beam) out.resize(opts_.beam);
  return out;
}

ConceptualizeSummary Conceptualizer::run(KgStore& store) const {
  ConceptualizeSummary sum;

  std::vector<const EventualityRecord*> eligible =
      store.conceptualizable(opts_.min_event_freq);
  sum.eventualities = eligible.size();
  for (const EventualityRecord* rec : eligible) {
    for (const ConceptOption& opt : conceptualize_record(*rec))
      store.upsert_concept(opt.words, rec->pattern, rec->eid, opt.prob);
  }
  sum.concepts = store.concepts().size();

  // eid -> (cid, Pr(C|E)) in cid order, so edge accumulation order is fixed.
  std::map<std::string, std::vector<std::pair<std::string, double>>> by_event;
  for (const auto& [cid, rec] : store.concepts())
    for (const auto& [eid, prob] : rec.instances)
      by_event[eid].push_back({cid, prob});

  // Snapshot before inserting projected edges; the loop must only see the
  // original eventuality-eventuality relations.
  std::vector<RelationRecord> base;
  for (const auto& [rid, rec] : store.relations())
    if (rec.head_kind == NodeKind::Event && rec.tail_kind == NodeKind::Event)
      base.push_back(rec);

  static const std::vector<std::pair<std::string, double>> kNone;
  for (const RelationRecord& rel : base) {
    auto h_it = by_event.find(rel.head_id);
    auto t_it = by_event.find(rel.tail_id);
    const auto& h_concepts = h_it == by_event.end() ? kNone : h_it->second;
    const auto& t_concepts = t_it == by_event.end() ? kNone : t_it->second;
    for (size_t ti = 0; ti < rel.weights.size(); ++ti) {
      double w = rel.weights[ti];
      if (w <= 0.0) continue;
      RelType type = (RelType)ti;
      for (const auto& [ch, ph] : h_concepts)
        store.upsert_relation_weight(ch, NodeKind::Concept, rel.tail_id,
                                     NodeKind::Event, type, ph * w);
      for (const auto& [ct, pt] : t_concepts)
        store.upsert_relation_weight(rel.head_id, NodeKind::Event, ct,
                                     NodeKind::Concept, type, pt * w);
      for (const auto& [ch, ph] : h_concepts)
        for (const auto& [ct, pt] : t_concepts)
          store.upsert_relation_weight(ch, NodeKind::Concept, ct,
                                       NodeKind::Concept, type, ph * w * pt);
    }
  }

  for (const auto& [rid, rec] : store.relations()) {
    int c = (rec.head_kind == NodeKind::Concept ? 1 : 0) +
            (rec.tail_kind == NodeKind::Concept ? 1 : 0);
    if (c == 1) ++sum.concept_event_edges;
    if (c == 2) ++sum.concept_concept_edges;
  }
  return sum;
}

double concept_weight(const ConceptRecord& rec, const KgStore& store) {
  double sum = 0.0;
  for (const auto& [eid, prob] : rec.instances)
    sum += prob * store.eventuality(eid).frequency;
  return sum;
}

}  // namespace evkg
