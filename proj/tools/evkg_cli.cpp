// evkg command line front end. Subcommands wrap the library one-to-one:
// build / conceptualize mutate a store, stats / query / mine-* read one,
// export / import move stores between sqlite and jsonl form.
//
// Exit codes: 0 ok, 1 runtime error, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "evkg/error.hpp"
#include "evkg/infer.hpp"
#include "evkg/metapath.hpp"
#include "evkg/pipeline.hpp"
#include "evkg/rules.hpp"
#include "evkg/store.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

// A store path is either a sqlite file or a directory of jsonl exports.
evkg::KgStore open_store(const std::string& path) {
  if (path.empty())
    throw evkg::UsageError("no store given (--store or store= in config)");
  if (fs::is_directory(path)) return evkg::import_jsonl(path);
  if (!fs::exists(path)) throw evkg::UsageError("store not found: " + path);
  return evkg::load_sqlite(path);
}

void write_store(const evkg::KgStore& store, const std::string& path) {
  if (fs::is_directory(path))
    evkg::export_jsonl(store, path);
  else
    evkg::save_sqlite(store, path);
}

std::vector<evkg::RelType> parse_types(const std::vector<std::string>& names) {
  std::vector<evkg::RelType> out;
  for (const std::string& n : names) {
    auto t = evkg::rel_from_name(n);
    if (!t) throw evkg::UsageError("unknown relation type: " + n);
    out.push_back(*t);
  }
  return out;
}

evkg::GraphLayer parse_layer(const std::string& name) {
  auto l = evkg::layer_from_name(name);
  if (!l) throw evkg::UsageError("unknown layer: " + name);
  return *l;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw evkg::Error("cannot write " + path);
  return file;
}

ojson tails_json(const std::vector<evkg::ScoredTail>& tails, size_t k,
                 bool witnesses) {
  ojson arr = ojson::array();
  for (const evkg::ScoredTail& t : tails) {
    if (k > 0 && arr.size() >= k) break;
    ojson row;
    row["id"] = t.id;
    row["prob"] = t.prob;
    if (witnesses && !t.witnesses.empty()) {
      ojson ws = ojson::array();
      for (const evkg::WitnessPath& w : t.witnesses)
        ws.push_back({{"middle", w.middle_id}, {"leg1", w.leg1}, {"leg2", w.leg2}});
      row["witnesses"] = std::move(ws);
    }
    arr.push_back(std::move(row));
  }
  return arr;
}

struct QueryArgs {
  std::string mode;  // tails | rels | prior
  std::string head;
  std::string tail;
  std::vector<std::string> types;
  int hops = 1;
  std::string layer = "event";
  bool no_cooccurrence = false;
  size_t k = 10;  // 0 = all
  bool witnesses = false;
};

int run_query(const evkg::PipelineConfig& cfg, const QueryArgs& q) {
  evkg::KgStore store = open_store(cfg.store_path);
  evkg::ConnectiveLexicon lex_storage;
  evkg::PatternTable pat_storage;
  const evkg::ConnectiveLexicon& lexicon = pipeline_lexicon(cfg, lex_storage);
  const evkg::PatternTable& patterns = pipeline_patterns(cfg, pat_storage);

  evkg::InferOptions opts;
  opts.layer = parse_layer(q.layer);
  opts.include_cooccurrence = !q.no_cooccurrence;
  evkg::InferenceEngine engine(store, opts);

  ojson out;
  out["query"] = q.mode;
  std::string head, tail;
  if (!q.head.empty()) {
    head = evkg::resolve_node(store, q.head, patterns, lexicon);
    out["head"] = head;
  }
  if (!q.tail.empty()) {
    tail = evkg::resolve_node(store, q.tail, patterns, lexicon);
    out["tail"] = tail;
  }
  out["layer"] = q.layer;

  if (q.mode == "tails") {
    if (head.empty()) throw evkg::UsageError("query tails needs --head");
    std::vector<evkg::RelType> types = parse_types(q.types);
    if (types.empty() || types.size() > 2)
      throw evkg::UsageError("query tails takes one or two --types");
    out["types"] = q.types;
    std::vector<evkg::ScoredTail> tails =
        types.size() == 1 ? engine.tails_1hop(head, types[0])
                          : engine.tails_2hop(head, types[0], types[1]);
    out["results"] = tails_json(tails, q.k, q.witnesses || types.size() == 2);
  } else if (q.mode == "rels") {
    if (head.empty() || tail.empty())
      throw evkg::UsageError("query rels needs --head and --tail");
    if (!q.types.empty())
      throw evkg::UsageError("query rels ranks every type; --types not allowed");
    ojson arr = ojson::array();
    if (q.hops == 1) {
      for (const evkg::ScoredRel& r : engine.relations_1hop(head, tail)) {
        if (q.k > 0 && arr.size() >= q.k) break;
        arr.push_back({{"type", evkg::rel_name(r.type)}, {"prob", r.prob}});
      }
    } else if (q.hops == 2) {
      for (const evkg::ScoredRelPair& r : engine.relations_2hop(head, tail)) {
        if (q.k > 0 && arr.size() >= q.k) break;
        arr.push_back({{"first", evkg::rel_name(r.first)},
                       {"second", evkg::rel_name(r.second)},
                       {"prob", r.prob}});
      }
    } else {
      throw evkg::UsageError("--hops must be 1 or 2");
    }
    out["results"] = std::move(arr);
  } else if (q.mode == "prior") {
    if (head.empty()) throw evkg::UsageError("query prior needs --head");
    ojson arr = ojson::array();
    for (const evkg::ScoredRel& r : engine.type_prior(head)) {
      if (q.k > 0 && arr.size() >= q.k) break;
      arr.push_back({{"type", evkg::rel_name(r.type)}, {"prob", r.prob}});
    }
    out["results"] = std::move(arr);
  } else {
    throw evkg::UsageError("unknown query mode: " + q.mode +
                           " (expected tails, rels or prior)");
  }

  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_build(const evkg::PipelineConfig& cfg) {
  if (cfg.inputs.empty())
    throw evkg::UsageError("build needs at least one --input");
  evkg::KgStore store;
  evkg::BuildReport report = evkg::build_store(cfg, store);
  if (!cfg.store_path.empty()) evkg::save_sqlite(store, cfg.store_path);
  if (!cfg.export_dir.empty()) evkg::export_jsonl(store, cfg.export_dir);
  std::cout << "documents: " << report.documents
            << ", paragraphs: " << report.paragraphs
            << ", sentences: " << report.sentences << "\n"
            << "eventuality instances: " << report.eventuality_instances
            << ", relation instances: " << report.relation_instances << "\n"
            << evkg::stats_report(store);
  return 0;
}

int run_conceptualize(const evkg::PipelineConfig& cfg) {
  evkg::KgStore store = open_store(cfg.store_path);
  evkg::ConceptualizeSummary s = evkg::conceptualize_store(cfg, store);
  write_store(store, cfg.store_path);
  if (!cfg.export_dir.empty()) evkg::export_jsonl(store, cfg.export_dir);
  std::cout << "eventualities conceptualized: " << s.eventualities << "\n"
            << "concepts: " << s.concepts << "\n"
            << "concept-event edges: " << s.concept_event_edges << "\n"
            << "concept-concept edges: " << s.concept_concept_edges << "\n";
  return 0;
}

struct MineRuleArgs {
  std::string layer = "event";
  std::string multiplicity = "round";
  bool include_cooccurrence = false;
  double min_hc = 0.01;
  double min_pca = 0.1;
  int max_body = 2;
  std::string output;
};

int run_mine_rules(const evkg::PipelineConfig& cfg, const MineRuleArgs& a) {
  evkg::KgStore store = open_store(cfg.store_path);
  auto mode = evkg::multiplicity_mode_from_name(a.multiplicity);
  if (!mode) throw evkg::UsageError("unknown multiplicity mode: " + a.multiplicity);
  if (a.min_hc < 0 || a.min_pca < 0)
    throw evkg::UsageError("thresholds must be non-negative");
  if (a.max_body < 1 || a.max_body > 2)
    throw evkg::UsageError("--max-body must be 1 or 2");

  evkg::FactSet facts = evkg::expand_facts(store, parse_layer(a.layer), *mode,
                                           a.include_cooccurrence);
  evkg::MineOptions opts;
  opts.min_hc = a.min_hc;
  opts.min_pca = a.min_pca;
  opts.max_body = a.max_body;
  std::vector<evkg::HornRule> rules = evkg::mine(facts, opts);

  std::ofstream file;
  std::ostream& os = open_output(a.output, file);
  for (const evkg::HornRule& r : rules) {
    ojson row;
    row["rule"] = r.to_string();
    row["support"] = r.support;
    row["head_coverage"] = r.head_coverage;
    row["confidence"] = r.confidence;
    row["pca_confidence"] = r.pca_confidence;
    os << row.dump() << "\n";
  }
  std::cerr << rules.size() << " rules over " << facts.facts.size()
            << " facts\n";
  return 0;
}

struct MineMetaArgs {
  size_t top = 0;  // 0 = all
  bool uniform = false;
  std::string instantiate;
  size_t k = 10;
  std::string output;
  size_t seeds = 50000;
  size_t walks = 50;
  size_t len = 4;
};

int run_mine_metapaths(const evkg::PipelineConfig& cfg, const MineMetaArgs& a) {
  evkg::KgStore store = open_store(cfg.store_path);
  evkg::HybridGraph graph(store);

  std::ofstream file;
  std::ostream& os = open_output(a.output, file);

  if (!a.instantiate.empty()) {
    for (const evkg::PathInstance& inst :
         evkg::instantiate(graph, a.instantiate, a.k)) {
      os << inst.score;
      for (const std::string& n : inst.nodes) os << "\t" << n;
      os << "\n";
    }
    return 0;
  }

  evkg::WalkConfig wc;
  wc.num_seeds = a.seeds;
  wc.walks_per_seed = a.walks;
  wc.walk_length = a.len;
  wc.rng_seed = cfg.rng_seed;
  wc.weighted = !a.uniform;
  evkg::MetaPathReport report = evkg::mine_metapaths(graph, wc);

  os << "path\thops\tcount\n";
  size_t emitted = 0;
  for (const evkg::MetaPathCount& c : report.counts) {
    if (a.top > 0 && emitted++ >= a.top) break;
    os << c.path << "\t" << c.hops << "\t" << c.count << "\n";
  }
  std::cerr << report.paths << " walks, " << report.counts.size()
            << " distinct meta-paths\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eventuality knowledge graph toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "key = value config file")
      ->check(CLI::ExistingFile);

  // Config-mirroring flags record (key, value) pairs during the parse and
  // get applied after the config file loads, so flags always win.
  std::vector<std::pair<std::string, std::string>> overrides;
  auto mirror = [&overrides](CLI::App* cmd, const std::string& flag,
                             std::string key, const std::string& help) {
    return cmd->add_option_function<std::string>(
        flag,
        [&overrides, key = std::move(key)](const std::string& v) {
          overrides.emplace_back(key, v);
        },
        help);
  };
  auto mirror_flag = [&overrides](CLI::App* cmd, const std::string& spec,
                                  std::string key, const std::string& help) {
    return cmd->add_flag_function(
        spec,
        [&overrides, key = std::move(key)](int64_t n) {
          overrides.emplace_back(key, n > 0 ? "true" : "false");
        },
        help);
  };
  auto store_flag = [&](CLI::App* cmd) {
    mirror(cmd, "--store", "store", "sqlite store file or jsonl directory");
  };

  CLI::App* build = app.add_subcommand("build", "extract a graph from a parsed corpus");
  mirror(build, "--input", "input", "corpus file (repeatable)")->take_all();
  mirror(build, "--format", "format", "parsed-jsonl or conllu");
  store_flag(build);
  mirror(build, "--export-dir", "export_dir", "also export jsonl here");
  mirror(build, "--lexicon", "lexicon", "connective lexicon TSV");
  mirror(build, "--patterns", "patterns", "eventuality pattern TSV");
  mirror_flag(build, "--core-filter,!--no-core-filter", "core_filter",
              "drop rare events and weak edges (default on)");
  mirror(build, "--min-event-freq", "min_event_freq", "core filter: minimum frequency");
  mirror(build, "--rel-weight-cutoff", "rel_weight_cutoff",
         "core filter: drop relations with total weight <= this");
  mirror(build, "--simpson-threshold", "simpson_threshold",
         "argument-eventuality match threshold");
  mirror(build, "--workers", "workers", "worker threads (0 = all cores)");

  CLI::App* conc = app.add_subcommand("conceptualize", "add the concept layer to a store");
  store_flag(conc);
  mirror(conc, "--isa-table", "isa_table", "IsA TSV: child, concept, prob or count");
  mirror(conc, "--export-dir", "export_dir", "also export jsonl here");
  mirror(conc, "--concept-gate", "concept_gate", "minimum eventuality frequency");
  mirror(conc, "--beam", "beam", "concepts kept per eventuality");
  mirror(conc, "--min-concept-prob", "min_concept_prob", "drop concepts below this probability");

  CLI::App* stats = app.add_subcommand("stats", "per-pattern and per-type breakdown");
  store_flag(stats);

  QueryArgs qa;
  CLI::App* query = app.add_subcommand("query", "probabilistic one- and two-hop queries");
  store_flag(query);
  query->add_option("mode", qa.mode, "tails, rels or prior")->required();
  query->add_option("--head", qa.head, "head node: id, lemma text or corpus file");
  query->add_option("--tail", qa.tail, "tail node (rels mode)");
  query->add_option("--types", qa.types, "relation types (tails mode)")->delimiter(',');
  query->add_option("--hops", qa.hops, "1 or 2 (rels mode)");
  query->add_option("--layer", qa.layer, "event, concept or hybrid");
  query->add_flag("--no-cooccurrence", qa.no_cooccurrence, "ignore Co-Occurrence edges");
  query->add_option("--k", qa.k, "results to print (0 = all)");
  query->add_flag("--witnesses", qa.witnesses, "print two-hop middle nodes");

  MineRuleArgs ra;
  CLI::App* rules = app.add_subcommand("mine-rules", "mine closed Horn rules over relation types");
  store_flag(rules);
  rules->add_option("--layer", ra.layer, "event, concept or hybrid");
  rules->add_option("--multiplicity", ra.multiplicity, "round, ceil or weight-exact");
  rules->add_flag("--include-cooccurrence", ra.include_cooccurrence,
                  "keep Co-Occurrence facts");
  rules->add_option("--min-hc", ra.min_hc, "head coverage threshold");
  rules->add_option("--min-pca", ra.min_pca, "PCA confidence threshold");
  rules->add_option("--max-body", ra.max_body, "body atoms (1 or 2)");
  rules->add_option("--output", ra.output, "jsonl output file (default stdout)");

  MineMetaArgs ma;
  CLI::App* meta = app.add_subcommand("mine-metapaths",
                                      "random-walk meta-path statistics on the hybrid graph");
  store_flag(meta);
  meta->add_option("--seeds", ma.seeds, "seed nodes to draw");
  meta->add_option("--walks", ma.walks, "walks per seed");
  meta->add_option("--len", ma.len, "edges per walk");
  mirror(meta, "--rng-seed", "rng_seed", "walk rng seed");
  meta->add_flag("--uniform", ma.uniform, "uniform instead of weighted transitions");
  meta->add_option("--top", ma.top, "meta-paths to print (0 = all)");
  meta->add_option("--instantiate", ma.instantiate,
                   "print top node sequences for this meta-path instead");
  meta->add_option("--k", ma.k, "instances to print with --instantiate");
  meta->add_option("--output", ma.output, "output file (default stdout)");

  std::string dir_arg;
  CLI::App* exp = app.add_subcommand("export", "write a store as jsonl");
  store_flag(exp);
  exp->add_option("--dir", dir_arg, "target directory")->required();

  CLI::App* imp = app.add_subcommand("import", "load a jsonl export into a sqlite store");
  imp->add_option("--dir", dir_arg, "jsonl directory")->required();
  std::string import_store;
  imp->add_option("--store", import_store, "sqlite file to write")->required();

  // Let `evkg build --config f` reach the app-level --config option.
  for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    evkg::PipelineConfig cfg;
    if (!config_path.empty()) cfg = evkg::load_config(config_path);
    for (const auto& [key, value] : overrides)
      evkg::set_config_value(cfg, key, value);

    if (build->parsed()) return run_build(cfg);
    if (conc->parsed()) return run_conceptualize(cfg);
    if (stats->parsed()) {
      std::cout << evkg::stats_report(open_store(cfg.store_path));
      return 0;
    }
    if (query->parsed()) return run_query(cfg, qa);
    if (rules->parsed()) return run_mine_rules(cfg, ra);
    if (meta->parsed()) return run_mine_metapaths(cfg, ma);
    if (exp->parsed()) {
      evkg::export_jsonl(open_store(cfg.store_path), dir_arg);
      return 0;
    }
    if (imp->parsed()) {
      evkg::save_sqlite(evkg::import_jsonl(dir_arg), import_store);
      return 0;
    }
    throw evkg::UsageError("no subcommand");
  } catch (const evkg::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
