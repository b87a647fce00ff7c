#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "evkg/types.hpp"

namespace evkg {

// Sentences grouped by paragraph; discourse windows never cross paragraphs.
struct Document {
  std::string doc_id;
  std::vector<std::vector<ParsedSentence>> paragraphs;
};

enum class CorpusFormat { ParsedJsonl, Conllu };

CorpusFormat format_from_name(const std::string& name);  // "parsed-jsonl" | "conllu"

// Readers validate every record and throw ParseError with a line number on
// malformed input. Dependency labels are passed through the alias map
// (obj->dobj, nsubj:pass->nsubjpass, auxpass->aux, nmod:poss->poss, ...).
std::vector<Document> load_parsed_jsonl(std::istream& in);
std::vector<Document> load_conllu(std::istream& in);
std::vector<Document> load_documents(const std::string& path, CorpusFormat fmt);

// Replaces URL-shaped tokens (scheme:// or leading www.) with the literal
// token "<URL>", POS Other. Idempotent.
void normalize(ParsedSentence& sent);
bool looks_like_url(const std::string& surface);

// Canonical label spelling used by the matcher.
std::string alias_label(const std::string& label);

}  // namespace evkg
