#include "evkg/ingest.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "evkg/error.hpp"
#include "nlohmann/json.hpp"

namespace evkg {

using nlohmann::json;

CorpusFormat format_from_name(const std::string& name) {
  if (name == "parsed-jsonl" || name == "jsonl") return CorpusFormat::ParsedJsonl;
  if (name == "conllu") return CorpusFormat::Conllu;
  throw UsageError("unknown corpus format '" + name + "' (want parsed-jsonl or conllu)");
}

std::string alias_label(const std::string& label) {
  static const std::map<std::string, std::string> kAlias = {
      {"obj", "dobj"},
      {"nsubj:pass", "nsubjpass"},
      {"csubj:pass", "csubjpass"},
      {"aux:pass", "aux"},
      {"auxpass", "aux"},
      {"nmod:poss", "poss"},
  };
  auto it = kAlias.find(label);
  return it == kAlias.end() ? label : it->second;
}

bool looks_like_url(const std::string& surface) {
  static const std::regex re(R"(^([A-Za-z][A-Za-z0-9+.-]*://\S*|www\.\S+)$)");
  return std::regex_match(surface, re);
}

void normalize(ParsedSentence& sent) {
  for (auto& t : sent.tokens) {
    if (looks_like_url(t.surface)) {
      t.surface = "<URL>";
      t.lemma = "<URL>";
      t.pos = Pos::Other;
    }
  }
}

namespace {

// Accumulates sentences into doc/paragraph structure in input order.
struct DocBuilder {
  std::vector<Document> docs;
  void add(ParsedSentence s) {
    if (docs.empty() || docs.back().doc_id != s.doc_id) {
      docs.push_back({s.doc_id, {}});
    }
    auto& paras = docs.back().paragraphs;
    if (paras.empty() || paras.back().empty() ||
        paras.back().back().para_id != s.para_id) {
      paras.emplace_back();
    }
    paras.back().push_back(std::move(s));
  }
};

const std::set<std::string> kNerLabels = {
    "Time", "Date",        "Duration", "Money",  "Percent",
    "Number", "Country",   "State-or-Province", "City", "Nationality",
    "Person", "Religion",  "URL"};

// Accepts CoreNLP-style spellings too (TIME, STATE_OR_PROVINCE, ...).
std::string canon_ner(std::string v) {
  if (v.empty() || v == "none" || v == "O" || v == "_") return "none";
  std::string key;
  for (char c : v) {
    if (c == '_' || c == '-' || c == ' ') key += '-';
    else key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  for (const auto& label : kNerLabels) {
    std::string lk;
    for (char c : label) {
      if (c == '-') lk += '-';
      else lk += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (key == lk) return label;
  }
  return "none";  // unsupported label: treated as untagged
}

}  // namespace

std::vector<Document> load_parsed_jsonl(std::istream& in) {
  DocBuilder b;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad JSON: ") + e.what(), line_no);
    }
    try {
      ParsedSentence s;
      s.doc_id = j.at("doc").get<std::string>();
      s.para_id = j.at("para").get<int>();
      s.sent_id = j.at("sent").get<int>();
      for (const auto& jt : j.at("tokens")) {
        Token t;
        t.index = jt.at("i").get<int>();
        t.surface = jt.at("w").get<std::string>();
        t.lemma = jt.at("l").get<std::string>();
        std::string tag = jt.at("p").get<std::string>();
        t.pos = pos_from_tag(tag, t.lemma);
        t.ner = canon_ner(jt.value("n", "none"));
        s.tokens.push_back(std::move(t));
      }
      for (const auto& jd : j.at("deps")) {
        if (!jd.is_array() || jd.size() != 3)
          throw ParseError("dep triple must be [gov, label, dep]", line_no);
        DepEdge e;
        e.gov = jd[0].get<int>();
        e.label = alias_label(jd[1].get<std::string>());
        e.dep = jd[2].get<int>();
        s.deps.push_back(std::move(e));
      }
      s.validate(line_no);
      normalize(s);
      b.add(std::move(s));
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad record: ") + e.what(), line_no);
    }
  }
  return std::move(b.docs);
}

std::vector<Document> load_conllu(std::istream& in) {
  DocBuilder b;
  std::string line;
  long line_no = 0;
  std::string doc_id = "doc0";
  int para_id = 0;
  int sent_id = 0;
  bool fresh_para = false;

  ParsedSentence cur;
  long sent_start_line = 0;
  auto flush = [&]() {
    if (cur.tokens.empty()) return;
    cur.doc_id = doc_id;
    cur.para_id = para_id;
    cur.sent_id = sent_id++;
    cur.validate(sent_start_line);
    normalize(cur);
    b.add(std::move(cur));
    cur = ParsedSentence{};
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') {
      if (line.rfind("# newdoc", 0) == 0) {
        flush();
        auto eq = line.find("id =");
        doc_id = eq == std::string::npos
                     ? "doc" + std::to_string(b.docs.size() + 1)
                     : line.substr(eq + 5);
        para_id = 0;
        sent_id = 0;
      } else if (line.rfind("# newpar", 0) == 0) {
        fresh_para = true;  // takes effect at the next sentence boundary
      }
      continue;
    }
    if (cur.tokens.empty()) {
      sent_start_line = line_no;
      if (fresh_para) {  // "# newpar" seen since the last sentence
        ++para_id;
        fresh_para = false;
      }
    }
    std::vector<std::string> cols;
    {
      std::istringstream ls(line);
      std::string c;
      while (std::getline(ls, c, '\t')) cols.push_back(c);
    }
    if (cols.size() < 8) throw ParseError("CoNLL-U row needs >= 8 columns", line_no);
    if (cols[0].find('-') != std::string::npos ||
        cols[0].find('.') != std::string::npos)
      continue;  // multiword-token ranges / empty nodes are skipped
    Token t;
    try {
      t.index = std::stoi(cols[0]) - 1;
    } catch (...) {
      throw ParseError("bad token id '" + cols[0] + "'", line_no);
    }
    t.surface = cols[1];
    t.lemma = cols[2] == "_" ? cols[1] : cols[2];
    const std::string& xpos = cols[4];
    t.pos = (xpos.empty() || xpos == "_") ? pos_from_tag(cols[3], t.lemma)
                                          : pos_from_tag(xpos, t.lemma);
    // NER rides in MISC as NER=Label
    if (cols.size() >= 10 && cols[9] != "_") {
      std::istringstream ms(cols[9]);
      std::string kv;
      while (std::getline(ms, kv, '|')) {
        if (kv.rfind("NER=", 0) == 0) t.ner = canon_ner(kv.substr(4));
      }
    }
    int head = 0;
    try {
      head = std::stoi(cols[6]);
    } catch (...) {
      throw ParseError("bad head '" + cols[6] + "'", line_no);
    }
    if (head > 0)
      cur.deps.push_back({head - 1, alias_label(cols[7]), t.index});
    cur.tokens.push_back(std::move(t));
  }
  flush();
  return std::move(b.docs);
}

std::vector<Document> load_documents(const std::string& path, CorpusFormat fmt) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file: " + path);
  return fmt == CorpusFormat::ParsedJsonl ? load_parsed_jsonl(in) : load_conllu(in);
}

}  // namespace evkg
