#pragma once

// Small hand-built corpora for unit tests.

#include <string>
#include <vector>

#include "scntm/corpus.hpp"

namespace scntm::testing {

struct ToyDoc {
  std::vector<std::int32_t> tokens;
  int author = -1;    // -1: missing
  int category = -1;  // -1: missing
};

inline Corpus make_corpus(const std::vector<ToyDoc>& spec_docs, int vocab_size,
                          int author_count, int category_count,
                          std::vector<std::pair<std::int32_t, std::int32_t>>
                              cites = {}) {
  std::vector<Document> docs;
  for (std::size_t i = 0; i < spec_docs.size(); ++i) {
    Document d;
    d.id = "doc" + std::to_string(i);
    d.abstract_tokens = spec_docs[i].tokens;
    if (spec_docs[i].author >= 0) d.author = spec_docs[i].author;
    if (spec_docs[i].category >= 0) d.category = spec_docs[i].category;
    docs.push_back(std::move(d));
  }
  std::vector<std::string> vocab, authors, categories;
  for (int w = 0; w < vocab_size; ++w) vocab.push_back("w" + std::to_string(w));
  for (int a = 0; a < author_count; ++a)
    authors.push_back("author" + std::to_string(a));
  for (int e = 0; e < category_count; ++e)
    categories.push_back("cat" + std::to_string(e));
  return Corpus::build(std::move(docs), std::move(vocab), std::move(authors),
                       std::move(categories), std::move(cites));
}

}  // namespace scntm::testing
