#include "scntm/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace scntm {

namespace {

std::runtime_error parse_error(const std::string& path, std::size_t line,
                               const std::string& what) {
  std::ostringstream os;
  os << path << ":" << line << ": " << what;
  return std::runtime_error(os.str());
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream is(line);
  std::string f;
  while (is >> f) fields.push_back(std::move(f));
  return fields;
}

void read_cites(const std::string& path, bool target_first,
                const std::unordered_map<std::string, std::int32_t>& index,
                std::vector<std::pair<std::int32_t, std::int32_t>>& edges,
                std::size_t& dropped) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open cites file: " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 2)
      throw parse_error(path, lineno, "expected two document ids");
    const std::string& src = target_first ? fields[1] : fields[0];
    const std::string& dst = target_first ? fields[0] : fields[1];
    auto it_src = index.find(src);
    auto it_dst = index.find(dst);
    if (it_src == index.end() || it_dst == index.end()) {
      ++dropped;  // citation to a document outside the corpus
      continue;
    }
    edges.emplace_back(it_src->second, it_dst->second);
  }
}

}  // namespace

std::size_t Corpus::total_tokens() const {
  std::size_t n = 0;
  for (const Document& d : docs_) n += d.token_count();
  return n;
}

std::size_t Corpus::external_citation_count() const {
  std::size_t n = 0;
  for (const auto& [i, j] : citations_) n += (i != j);
  return n;
}

Corpus Corpus::build(
    std::vector<Document> docs, std::vector<std::string> vocab,
    std::vector<std::string> authors, std::vector<std::string> categories,
    std::vector<std::pair<std::int32_t, std::int32_t>> cites) {
  Corpus c;
  c.docs_ = std::move(docs);
  c.vocab_ = std::move(vocab);
  c.authors_ = std::move(authors);
  c.categories_ = std::move(categories);
  c.citations_ = std::move(cites);
  c.finalize();
  return c;
}

void Corpus::finalize() {
  for (std::int32_t d = 0; d < static_cast<std::int32_t>(docs_.size()); ++d)
    citations_.emplace_back(d, d);
  std::sort(citations_.begin(), citations_.end());
  citations_.erase(std::unique(citations_.begin(), citations_.end()),
                   citations_.end());
  finalized_ = true;
  validate();
}

void Corpus::validate() const {
  const auto vsize = static_cast<std::int32_t>(vocab_.size());
  for (const Document& d : docs_) {
    for (std::int32_t w : d.title_tokens)
      if (w < 0 || w >= vsize)
        throw std::runtime_error("document " + d.id + ": token out of range");
    for (std::int32_t w : d.abstract_tokens)
      if (w < 0 || w >= vsize)
        throw std::runtime_error("document " + d.id + ": token out of range");
    if (d.author && (*d.author < 0 ||
                     *d.author >= static_cast<std::int32_t>(authors_.size())))
      throw std::runtime_error("document " + d.id + ": bad author index");
    if (d.category &&
        (*d.category < 0 ||
         *d.category >= static_cast<std::int32_t>(categories_.size())))
      throw std::runtime_error("document " + d.id + ": bad category index");
  }
  const auto dsize = static_cast<std::int32_t>(docs_.size());
  for (const auto& [i, j] : citations_)
    if (i < 0 || i >= dsize || j < 0 || j >= dsize)
      throw std::runtime_error("citation endpoint out of range");
}

Corpus load_linqs(const std::string& content_path,
                  const std::string& cites_path) {
  Corpus corpus;
  std::ifstream in(content_path);
  if (!in) throw std::runtime_error("cannot open content file: " + content_path);

  std::unordered_map<std::string, std::int32_t> doc_index;
  std::unordered_map<std::string, std::int32_t> category_index;
  std::string line;
  std::size_t lineno = 0;
  std::size_t feature_count = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() < 3)
      throw parse_error(content_path, lineno, "expected id, features, label");
    if (feature_count == 0) {
      feature_count = fields.size() - 2;
      corpus.vocab_.reserve(feature_count);
      for (std::size_t w = 0; w < feature_count; ++w)
        corpus.vocab_.push_back("w" + std::to_string(w));
    } else if (fields.size() != feature_count + 2) {
      throw parse_error(content_path, lineno,
                        "row has " + std::to_string(fields.size() - 2) +
                            " feature columns, expected " +
                            std::to_string(feature_count));
    }
    Document doc;
    doc.id = fields.front();
    if (!doc_index.emplace(doc.id, static_cast<std::int32_t>(corpus.docs_.size()))
             .second)
      throw parse_error(content_path, lineno, "duplicate doc_id " + doc.id);
    for (std::size_t w = 0; w < feature_count; ++w) {
      const std::string& v = fields[w + 1];
      std::size_t pos = 0;
      long count = 0;
      try {
        count = std::stol(v, &pos);
      } catch (const std::exception&) {
        throw parse_error(content_path, lineno, "bad feature value '" + v + "'");
      }
      if (pos != v.size() || count < 0)
        throw parse_error(content_path, lineno, "bad feature value '" + v + "'");
      for (long r = 0; r < count; ++r)
        doc.abstract_tokens.push_back(static_cast<std::int32_t>(w));
    }
    const std::string& label = fields.back();
    auto [it, inserted] = category_index.emplace(
        label, static_cast<std::int32_t>(corpus.categories_.size()));
    if (inserted) corpus.categories_.push_back(label);
    doc.category = it->second;
    corpus.docs_.push_back(std::move(doc));
  }
  if (corpus.docs_.empty())
    throw std::runtime_error("content file has no documents: " + content_path);

  read_cites(cites_path, /*target_first=*/true, doc_index,
             corpus.citations_, corpus.dropped_citations_);
  corpus.finalize();
  return corpus;
}

Corpus load_jsonl(const std::string& docs_path, const std::string& cites_path) {
  Corpus corpus;
  std::ifstream in(docs_path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + docs_path);

  std::unordered_map<std::string, std::int32_t> doc_index, vocab_index,
      author_index, category_index;
  auto intern = [](std::unordered_map<std::string, std::int32_t>& index,
                   std::vector<std::string>& names,
                   const std::string& s) -> std::int32_t {
    auto [it, inserted] =
        index.emplace(s, static_cast<std::int32_t>(names.size()));
    if (inserted) names.push_back(s);
    return it->second;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw parse_error(docs_path, lineno, e.what());
    }
    if (!j.contains("id") || !j["id"].is_string())
      throw parse_error(docs_path, lineno, "missing string field 'id'");
    Document doc;
    doc.id = j["id"].get<std::string>();
    if (!doc_index.emplace(doc.id, static_cast<std::int32_t>(corpus.docs_.size()))
             .second)
      throw parse_error(docs_path, lineno, "duplicate doc_id " + doc.id);
    auto read_tokens = [&](const char* field, std::vector<std::int32_t>& out) {
      if (!j.contains(field)) return;
      if (!j[field].is_array())
        throw parse_error(docs_path, lineno,
                          std::string("field '") + field + "' must be an array");
      for (const auto& tok : j[field]) {
        if (!tok.is_string())
          throw parse_error(docs_path, lineno, "tokens must be strings");
        out.push_back(
            intern(vocab_index, corpus.vocab_, tok.get<std::string>()));
      }
    };
    read_tokens("title", doc.title_tokens);
    read_tokens("abstract", doc.abstract_tokens);
    if (j.contains("author") && !j["author"].is_null())
      doc.author =
          intern(author_index, corpus.authors_, j["author"].get<std::string>());
    if (j.contains("category") && !j["category"].is_null())
      doc.category = intern(category_index, corpus.categories_,
                            j["category"].get<std::string>());
    corpus.docs_.push_back(std::move(doc));
  }
  if (corpus.docs_.empty())
    throw std::runtime_error("corpus file has no documents: " + docs_path);

  read_cites(cites_path, /*target_first=*/false, doc_index,
             corpus.citations_, corpus.dropped_citations_);
  corpus.finalize();
  return corpus;
}

TfidfRecovery recover_counts_from_tfidf(const SparseRealMatrix& tfidf) {
  const std::size_t n_docs = tfidf.size();
  std::unordered_map<std::int32_t, std::int64_t> doc_freq;
  for (const auto& row : tfidf)
    for (const auto& [w, v] : row)
      if (v > 0.0) ++doc_freq[w];

  TfidfRecovery out;
  out.counts.resize(n_docs);
  for (std::size_t d = 0; d < n_docs; ++d) {
    double min_f = std::numeric_limits<double>::infinity();
    std::vector<std::pair<std::int32_t, double>> f_row;
    for (const auto& [w, v] : tfidf[d]) {
      if (v < 0.0)
        throw std::runtime_error("tf-idf recovery: negative entry");
      if (v == 0.0) continue;
      std::int64_t df = doc_freq[w];
      if (df == static_cast<std::int64_t>(n_docs))
        throw std::runtime_error(
            "tf-idf recovery: word " + std::to_string(w) +
            " occurs in every document (idf 0), counts unrecoverable");
      double f = v / std::log(static_cast<double>(n_docs) /
                              static_cast<double>(df));
      f_row.emplace_back(w, f);
      min_f = std::min(min_f, f);
    }
    if (f_row.empty())
      throw std::runtime_error("tf-idf recovery: document " +
                               std::to_string(d) + " has no positive entry");
    double normalizer = 1.0 / min_f;
    for (const auto& [w, f] : f_row) {
      double value = f * normalizer;
      double rounded = std::round(value);
      if (std::abs(value - rounded) > 1e-6 * std::max(1.0, std::abs(value)))
        ++out.rounding_warnings;
      if (rounded < 1.0) rounded = 1.0;
      out.counts[d].emplace_back(w, static_cast<std::int64_t>(rounded));
    }
  }
  return out;
}

SparseRealMatrix tfidf_from_counts(const SparseCountMatrix& counts) {
  const std::size_t n_docs = counts.size();
  std::unordered_map<std::int32_t, std::int64_t> doc_freq;
  for (const auto& row : counts)
    for (const auto& [w, c] : row)
      if (c > 0) ++doc_freq[w];
  SparseRealMatrix out(n_docs);
  for (std::size_t d = 0; d < n_docs; ++d) {
    std::int64_t total = 0;
    for (const auto& [w, c] : counts[d]) total += c;
    for (const auto& [w, c] : counts[d]) {
      if (c == 0) continue;
      double tf = static_cast<double>(c) / static_cast<double>(total);
      double idf = std::log(static_cast<double>(n_docs) /
                            static_cast<double>(doc_freq[w]));
      out[d].emplace_back(w, tf * idf);
    }
  }
  return out;
}

Corpus filter_vocabulary(const Corpus& corpus,
                         const std::unordered_set<std::string>& stopwords,
                         double common_frac, std::int64_t rare_count) {
  if (!(common_frac > 0.0 && common_frac <= 1.0))
    throw std::invalid_argument("filter_vocabulary: common_frac in (0, 1]");
  if (rare_count < 0)
    throw std::invalid_argument("filter_vocabulary: rare_count >= 0");

  const std::size_t vsize = corpus.vocab().size();
  std::vector<std::int64_t> doc_freq(vsize, 0), corpus_freq(vsize, 0);
  std::vector<bool> seen(vsize, false);
  for (const Document& d : corpus.docs()) {
    std::fill(seen.begin(), seen.end(), false);
    auto tally = [&](const std::vector<std::int32_t>& toks) {
      for (std::int32_t w : toks) {
        ++corpus_freq[w];
        if (!seen[w]) {
          seen[w] = true;
          ++doc_freq[w];
        }
      }
    };
    tally(d.title_tokens);
    tally(d.abstract_tokens);
  }

  const double max_docs = common_frac * static_cast<double>(corpus.doc_count());
  std::vector<std::int32_t> remap(vsize, -1);
  Corpus out;
  for (std::size_t w = 0; w < vsize; ++w) {
    if (stopwords.count(corpus.vocab()[w])) continue;
    if (static_cast<double>(doc_freq[w]) > max_docs) continue;
    if (corpus_freq[w] < rare_count) continue;
    remap[w] = static_cast<std::int32_t>(out.vocab_.size());
    out.vocab_.push_back(corpus.vocab()[w]);
  }
  if (out.vocab_.empty())
    throw std::runtime_error("filter_vocabulary: all words removed");

  out.authors_ = corpus.authors();
  out.categories_ = corpus.categories();
  out.docs_.reserve(corpus.doc_count());
  for (const Document& d : corpus.docs()) {
    Document nd;
    nd.id = d.id;
    nd.author = d.author;
    nd.category = d.category;
    auto reencode = [&](const std::vector<std::int32_t>& in,
                        std::vector<std::int32_t>& o) {
      for (std::int32_t w : in)
        if (remap[w] >= 0) o.push_back(remap[w]);
    };
    reencode(d.title_tokens, nd.title_tokens);
    reencode(d.abstract_tokens, nd.abstract_tokens);
    out.docs_.push_back(std::move(nd));
  }
  for (const auto& [i, j] : corpus.citations())
    if (i != j) out.citations_.emplace_back(i, j);
  out.withheld_ = corpus.withheld_citations();
  out.dropped_citations_ = corpus.dropped_citations();
  if (corpus.finalized()) out.finalize();
  return out;
}

std::pair<Corpus, Corpus> split_by_mask(const Corpus& corpus,
                                        const std::vector<bool>& is_test) {
  Corpus train, test;
  train.vocab_ = test.vocab_ = corpus.vocab();
  train.authors_ = test.authors_ = corpus.authors();
  train.categories_ = test.categories_ = corpus.categories();

  std::vector<std::int32_t> new_index(corpus.doc_count());
  for (std::size_t d = 0; d < corpus.doc_count(); ++d) {
    Corpus& side = is_test[d] ? test : train;
    new_index[d] = static_cast<std::int32_t>(side.docs_.size());
    side.docs_.push_back(corpus.docs()[d]);
  }
  if (train.docs_.empty() || test.docs_.empty())
    throw std::invalid_argument("split: a side would be empty");

  for (const auto& [i, j] : corpus.citations()) {
    if (i == j) continue;  // self-loops are re-added at finalize
    if (!is_test[i] && !is_test[j]) {
      train.citations_.emplace_back(new_index[i], new_index[j]);
    } else if (is_test[i] && !is_test[j]) {
      test.withheld_.push_back(
          WithheldCitation{corpus.docs()[i].id, corpus.docs()[j].id});
    }
  }
  train.finalize();
  test.finalize();
  return {std::move(train), std::move(test)};
}

std::pair<Corpus, Corpus> split_train_test(const Corpus& corpus,
                                           double test_frac,
                                           std::uint64_t seed) {
  if (!(test_frac > 0.0 && test_frac < 1.0))
    throw std::invalid_argument("split_train_test: test_frac in (0, 1)");
  const std::size_t n = corpus.doc_count();
  auto n_train = static_cast<std::size_t>(
      std::floor((1.0 - test_frac) * static_cast<double>(n)));
  if (n_train == 0 || n_train == n)
    throw std::invalid_argument("split_train_test: a side would be empty");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> is_test(n, false);
  for (std::size_t i = n_train; i < n; ++i) is_test[order[i]] = true;
  return split_by_mask(corpus, is_test);
}

std::vector<int> assign_folds(std::size_t doc_count, int folds,
                              std::uint64_t seed) {
  if (folds < 1) throw std::invalid_argument("assign_folds: folds >= 1");
  std::vector<std::size_t> order(doc_count);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> fold_of(doc_count, 0);
  for (std::size_t i = 0; i < doc_count; ++i)
    fold_of[order[i]] = static_cast<int>(i % folds);
  return fold_of;
}

std::pair<Corpus, Corpus> split_fold(const Corpus& corpus,
                                     const std::vector<int>& fold_of_doc,
                                     int fold) {
  std::vector<bool> is_test(corpus.doc_count());
  for (std::size_t d = 0; d < corpus.doc_count(); ++d)
    is_test[d] = (fold_of_doc[d] == fold);
  return split_by_mask(corpus, is_test);
}

}  // namespace scntm
