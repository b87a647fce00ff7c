#include "evkg/ids.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <sstream>

#include "evkg/error.hpp"

namespace evkg {

std::string digest128(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(),
                 nullptr) != 1)
    throw Error("sha256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(32);
  for (unsigned i = 0; i < 16; ++i) {  // 128 bits of the 256-bit digest
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

std::string eventuality_canonical(const Eventuality& ev) {
  std::ostringstream os;
  for (size_t i = 0; i < ev.words.size(); ++i) {
    if (i) os << ',';
    os << ev.words[i].lemma << '/' << pos_code(ev.words[i].pos);
  }
  os << '|';
  std::vector<std::array<std::string, 3>> triples;
  triples.reserve(ev.edges.size());
  for (const auto& e : ev.edges) {
    const Token* g = ev.token_at(e.gov);
    const Token* d = ev.token_at(e.dep);
    triples.push_back({g ? g->lemma : "?", e.label, d ? d->lemma : "?"});
  }
  std::sort(triples.begin(), triples.end());
  for (size_t i = 0; i < triples.size(); ++i) {
    if (i) os << ',';
    os << triples[i][0] << '-' << triples[i][1] << '-' << triples[i][2];
  }
  return os.str();
}

std::string eid_of(const Eventuality& ev) {
  return digest128(eventuality_canonical(ev));
}

std::string concept_canonical(const std::vector<std::string>& concept_words) {
  std::ostringstream os;
  for (size_t i = 0; i < concept_words.size(); ++i) {
    if (i) os << '\x1f';
    os << concept_words[i];
  }
  return os.str();
}

std::string cid_of(const std::vector<std::string>& concept_words) {
  return digest128(concept_canonical(concept_words));
}

std::string relation_canonical(std::string_view head_id, std::string_view tail_id) {
  std::string s;
  s.reserve(head_id.size() + tail_id.size() + 1);
  s.append(head_id);
  s.push_back('|');
  s.append(tail_id);
  return s;
}

std::string rid_of(std::string_view head_id, std::string_view tail_id) {
  return digest128(relation_canonical(head_id, tail_id));
}

}  // namespace evkg
