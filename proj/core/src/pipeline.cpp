#include "evkg/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "evkg/clauses.hpp"
#include "evkg/discourse.hpp"
#include "evkg/error.hpp"

namespace evkg {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  for (char& c : s) c = (char)std::tolower((unsigned char)c);
  return s;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("bad number for " + key + ": '" + value + "'");
  }
}

uint64_t parse_uint(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("bad integer for " + key + ": '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  std::string v = lower(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw UsageError("bad boolean for " + key + ": '" + value + "'");
}

}  // namespace

void set_config_value(PipelineConfig& cfg, const std::string& key,
                      const std::string& value) {
  if (key == "input") cfg.inputs.push_back(value);
  else if (key == "format") cfg.format = value;
  else if (key == "store") cfg.store_path = value;
  else if (key == "export_dir") cfg.export_dir = value;
  else if (key == "lexicon") cfg.lexicon_path = value;
  else if (key == "patterns") cfg.patterns_path = value;
  else if (key == "isa_table") cfg.isa_path = value;
  else if (key == "core_filter") cfg.core_filter = parse_bool(key, value);
  else if (key == "min_event_freq") cfg.min_event_freq = parse_double(key, value);
  else if (key == "rel_weight_cutoff") cfg.rel_weight_cutoff = parse_double(key, value);
  else if (key == "concept_gate") cfg.concept_gate = parse_double(key, value);
  else if (key == "beam") cfg.beam = (size_t)parse_uint(key, value);
  else if (key == "min_concept_prob") cfg.min_concept_prob = parse_double(key, value);
  else if (key == "simpson_threshold") cfg.simpson_threshold = parse_double(key, value);
  else if (key == "workers") cfg.workers = (int)parse_uint(key, value);
  else if (key == "rng_seed") cfg.rng_seed = parse_uint(key, value);
  else throw UsageError("unknown config key '" + key + "'");
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path);
  PipelineConfig cfg;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected key = value", lineno);
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    try {
      set_config_value(cfg, key, value);
    } catch (const UsageError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return cfg;
}

const ConnectiveLexicon& pipeline_lexicon(const PipelineConfig& cfg,
                                          ConnectiveLexicon& storage) {
  if (cfg.lexicon_path.empty()) return ConnectiveLexicon::builtin();
  storage = ConnectiveLexicon::load_tsv(cfg.lexicon_path);
  return storage;
}

const PatternTable& pipeline_patterns(const PipelineConfig& cfg,
                                      PatternTable& storage) {
  if (cfg.patterns_path.empty()) return PatternTable::builtin();
  storage = PatternTable::load_tsv(cfg.patterns_path);
  return storage;
}

ParagraphResult process_paragraph(const std::vector<ParsedSentence>& sents,
                                  const PatternTable& patterns,
                                  const ConnectiveLexicon& lexicon,
                                  double simpson_threshold) {
  ParagraphResult out;
  std::vector<std::vector<Eventuality>> per_sent;
  per_sent.reserve(sents.size());
  for (const ParsedSentence& sent : sents) {
    std::vector<Clause> clauses = split_clauses(sent, lexicon);
    per_sent.push_back(extract_all(sent, clauses, patterns));
  }
  for (size_t i = 0; i < sents.size(); ++i) {
    const ParsedSentence* prev = i ? &sents[i - 1] : nullptr;
    const std::vector<Eventuality>* prev_evs = i ? &per_sent[i - 1] : nullptr;
    DiscourseResult disc = emit_relations(sents[i], per_sent[i], prev,
                                          prev_evs, lexicon, simpson_threshold);
    std::vector<RelationInstance> cooc =
        emit_cooccurrence(sents[i], per_sent[i], disc.linked);
    for (RelationInstance& r : disc.instances)
      out.relations.push_back(std::move(r));
    for (RelationInstance& r : cooc) out.relations.push_back(std::move(r));
  }
  // Hand the eventualities off only now: sentence i stays intact while
  // sentence i+1 resolves its backward-pointing arguments against it.
  for (auto& evs : per_sent)
    for (Eventuality& ev : evs) out.eventualities.push_back(std::move(ev));
  return out;
}

BuildReport build_store(const PipelineConfig& cfg, KgStore& store) {
  BuildReport report;
  ConnectiveLexicon lex_storage;
  PatternTable pat_storage;
  const ConnectiveLexicon& lexicon = pipeline_lexicon(cfg, lex_storage);
  const PatternTable& patterns = pipeline_patterns(cfg, pat_storage);

  CorpusFormat fmt = format_from_name(cfg.format);
  std::vector<Document> docs;
  for (const std::string& input : cfg.inputs) {
    std::vector<Document> loaded = load_documents(input, fmt);
    for (Document& d : loaded) docs.push_back(std::move(d));
  }

  std::vector<const std::vector<ParsedSentence>*> paragraphs;
  for (const Document& doc : docs) {
    ++report.documents;
    for (const auto& para : doc.paragraphs) {
      ++report.paragraphs;
      report.sentences += para.size();
      paragraphs.push_back(&para);
    }
  }

  // Map step: paragraphs are independent; results land in their slot so the
  // fold below never depends on the worker count.
  std::vector<ParagraphResult> results(paragraphs.size());
  int workers = cfg.workers > 0 ? cfg.workers
                                : (int)std::thread::hardware_concurrency();
  if (workers < 1) workers = 1;
  workers = std::min<int>(workers, std::max<size_t>(paragraphs.size(), 1));

  std::atomic<size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;
  auto work = [&]() {
    for (;;) {
      size_t i = cursor.fetch_add(1);
      if (i >= paragraphs.size() || failed.load()) return;
      try {
        results[i] = process_paragraph(*paragraphs[i], patterns, lexicon,
                                       cfg.simpson_threshold);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        failed.store(true);
        if (error_message.empty()) error_message = e.what();
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failed.load()) throw Error("build failed: " + error_message);

  store = KgStore();
  for (const ParagraphResult& res : results) {
    report.eventuality_instances += res.eventualities.size();
    report.relation_instances += res.relations.size();
    store.upsert_eventualities(res.eventualities);
    store.upsert_relations(res.relations);
  }

  if (cfg.core_filter)
    store = store.filter_core(cfg.min_event_freq, cfg.rel_weight_cutoff);
  report.stats = store.stats();
  return report;
}

ConceptualizeSummary conceptualize_store(const PipelineConfig& cfg,
                                         KgStore& store) {
  if (cfg.isa_path.empty())
    throw UsageError("conceptualization needs isa_table");
  IsATable table = IsATable::load_tsv(cfg.isa_path);
  ConceptualizeOptions opts;
  opts.min_event_freq = cfg.concept_gate;
  opts.beam = cfg.beam;
  opts.min_concept_prob = cfg.min_concept_prob;
  return Conceptualizer(std::move(table), opts).run(store);
}

std::string stats_report(const KgStore& store) {
  StoreStats st = store.stats();
  std::string out;
  char buf[160];

  std::snprintf(buf, sizeof buf, "eventualities: %zu unique, %.3f total\n",
                st.eventuality_count, st.eventuality_frequency_sum);
  out += buf;
  std::snprintf(buf, sizeof buf, "  %-12s %10s %14s\n", "pattern", "unique",
                "frequency");
  out += buf;
  std::vector<std::string> codes;
  for (const Pattern& p : PatternTable::builtin().patterns()) codes.push_back(p.code);
  for (const auto& [code, stat] : st.per_pattern)
    if (std::find(codes.begin(), codes.end(), code) == codes.end())
      codes.push_back(code);
  for (const std::string& code : codes) {
    auto it = st.per_pattern.find(code);
    size_t n = it == st.per_pattern.end() ? 0 : it->second.unique_count;
    double f = it == st.per_pattern.end() ? 0.0 : it->second.total_frequency;
    std::snprintf(buf, sizeof buf, "  %-12s %10zu %14.3f\n", code.c_str(), n, f);
    out += buf;
  }

  std::snprintf(buf, sizeof buf, "relations: %zu pairs\n", st.relation_count);
  out += buf;
  std::snprintf(buf, sizeof buf, "  %-18s %10s %14s\n", "type", "pairs",
                "weight");
  out += buf;
  for (size_t i = 0; i < st.per_type.size(); ++i) {
    std::snprintf(buf, sizeof buf, "  %-18s %10zu %14.3f\n", kRelTypeNames[i],
                  st.per_type[i].record_count, st.per_type[i].total_weight);
    out += buf;
  }

  std::snprintf(buf, sizeof buf, "concepts: %zu\n", st.concept_count);
  out += buf;
  return out;
}

namespace {

bool is_hex_id(const std::string& s) {
  if (s.size() != 32) return false;
  for (char c : s)
    if (!std::isxdigit((unsigned char)c) || std::isupper((unsigned char)c))
      return false;
  return true;
}

std::string joined_lower(const std::vector<std::string>& words) {
  std::string s;
  for (const std::string& w : words) {
    if (!s.empty()) s += ' ';
    s += lower(w);
  }
  return s;
}

}  // namespace

std::string resolve_node(const KgStore& store, const std::string& anchor,
                         const PatternTable& patterns,
                         const ConnectiveLexicon& lexicon) {
  if (is_hex_id(anchor)) {
    if (store.has_node(anchor)) return anchor;
    throw NotFoundError("node " + anchor);
  }

  if (std::filesystem::exists(anchor)) {
    CorpusFormat fmt = anchor.ends_with(".conllu") ? CorpusFormat::Conllu
                                                   : CorpusFormat::ParsedJsonl;
    std::vector<Document> docs = load_documents(anchor, fmt);
    for (const Document& doc : docs) {
      for (const auto& para : doc.paragraphs) {
        for (const ParsedSentence& sent : para) {
          std::vector<Clause> clauses = split_clauses(sent, lexicon);
          std::vector<Eventuality> evs = extract_all(sent, clauses, patterns);
          if (evs.empty()) continue;
          if (!store.has_node(evs[0].eid))
            throw NotFoundError("extracted eventuality " + evs[0].eid +
                                " (" + evs[0].text() + ") is not in the store");
          return evs[0].eid;
        }
      }
    }
    throw NotFoundError("no eventuality extracted from " + anchor);
  }

  std::string wanted = joined_lower({anchor});
  // Normalize runs of whitespace in free text.
  {
    std::istringstream ss(anchor);
    std::string tok, acc;
    while (ss >> tok) {
      if (!acc.empty()) acc += ' ';
      acc += lower(tok);
    }
    wanted = acc;
  }
  if (wanted.empty()) throw NotFoundError("empty anchor");

  for (const auto& [eid, rec] : store.eventualities())
    if (joined_lower(rec.words) == wanted || joined_lower(rec.skeleton) == wanted)
      return eid;
  for (const auto& [cid, rec] : store.concepts())
    if (joined_lower(rec.words) == wanted) return cid;
  throw NotFoundError("no node matches '" + anchor + "'");
}

}  // namespace evkg
