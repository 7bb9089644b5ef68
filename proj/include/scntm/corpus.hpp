#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace scntm {

struct Document {
  std::string id;
  std::vector<std::int32_t> title_tokens;
  std::vector<std::int32_t> abstract_tokens;
  std::optional<std::int32_t> author;    // first author only
  std::optional<std::int32_t> category;

  std::size_t token_count() const {
    return title_tokens.size() + abstract_tokens.size();
  }
  std::vector<std::int32_t> all_tokens() const {
    std::vector<std::int32_t> out(title_tokens);
    out.insert(out.end(), abstract_tokens.begin(), abstract_tokens.end());
    return out;
  }
};

// A held-out citation from a test document to a training document, kept by
// document id so it survives re-indexing across the split.
struct WithheldCitation {
  std::string src_id;  // test document (the citer)
  std::string dst_id;  // training document
};

// Tokenized documents plus label spaces and the citation edge set. After
// finalize() the edge set is deduplicated, every document carries a self-loop
// (x_ii = 1), and a Corpus is immutable in practice: loaders and transforms
// hand out fresh instances.
class Corpus {
 public:
  const std::vector<Document>& docs() const { return docs_; }
  const std::vector<std::string>& vocab() const { return vocab_; }
  const std::vector<std::string>& authors() const { return authors_; }
  const std::vector<std::string>& categories() const { return categories_; }
  // ordered (i, j) pairs, i cites j; includes self-loops once finalized
  const std::vector<std::pair<std::int32_t, std::int32_t>>& citations() const {
    return citations_;
  }
  const std::vector<WithheldCitation>& withheld_citations() const {
    return withheld_;
  }

  std::size_t doc_count() const { return docs_.size(); }
  std::size_t total_tokens() const;
  // citation count excluding the finalization self-loops
  std::size_t external_citation_count() const;
  std::size_t dropped_citations() const { return dropped_citations_; }
  bool finalized() const { return finalized_; }

  // Deduplicates edges, adds self-loops, and validates all invariants.
  void finalize();

  // Assembles a corpus from parts (synthetic corpora, tests); finalizes.
  static Corpus build(std::vector<Document> docs,
                      std::vector<std::string> vocab,
                      std::vector<std::string> authors,
                      std::vector<std::string> categories,
                      std::vector<std::pair<std::int32_t, std::int32_t>> cites);

  friend Corpus load_linqs(const std::string& content_path,
                           const std::string& cites_path);
  friend Corpus load_jsonl(const std::string& docs_path,
                           const std::string& cites_path);
  friend Corpus filter_vocabulary(const Corpus& corpus,
                                  const std::unordered_set<std::string>& stop,
                                  double common_frac, std::int64_t rare_count);
  friend std::pair<Corpus, Corpus> split_by_mask(
      const Corpus& corpus, const std::vector<bool>& is_test);

 private:
  void validate() const;

  std::vector<Document> docs_;
  std::vector<std::string> vocab_, authors_, categories_;
  std::vector<std::pair<std::int32_t, std::int32_t>> citations_;
  std::vector<WithheldCitation> withheld_;
  std::size_t dropped_citations_ = 0;
  bool finalized_ = false;
};

// LINQS .content / .cites loader. Content rows are
// `<doc_id> <feature values...> <class_label>`; cites rows are
// `<target_id> <source_id>`. Boolean feature columns become repeated-once
// tokens with synthetic names w<index>; the class label becomes the category.
Corpus load_linqs(const std::string& content_path,
                  const std::string& cites_path);

// JSONL loader: one object per line with `id`, `title`, `abstract` (arrays of
// token strings), optional `author`, `category`. The edge list file has
// `src_id dst_id` per line.
Corpus load_jsonl(const std::string& docs_path, const std::string& cites_path);

// Sparse non-negative matrix, one row per document of (column, value) pairs.
using SparseRealMatrix =
    std::vector<std::vector<std::pair<std::int32_t, double>>>;
using SparseCountMatrix =
    std::vector<std::vector<std::pair<std::int32_t, std::int64_t>>>;

struct TfidfRecovery {
  SparseCountMatrix counts;
  std::size_t rounding_warnings = 0;
};

// Inverts the tf-idf transform under the assumption that the least frequent
// word in each document occurs exactly once. Errors when a positive entry
// belongs to a word present in every document (idf 0) or a row is all zero.
TfidfRecovery recover_counts_from_tfidf(const SparseRealMatrix& tfidf);

// The forward transform: tf-idf from counts (tf = c / sum_c,
// idf = log(D / doc_freq)).
SparseRealMatrix tfidf_from_counts(const SparseCountMatrix& counts);

// Removes stopwords, words in more than common_frac of the documents, and
// words occurring fewer than rare_count times; re-indexes the vocabulary.
Corpus filter_vocabulary(const Corpus& corpus,
                         const std::unordered_set<std::string>& stopwords,
                         double common_frac, std::int64_t rare_count);

// Deterministic shuffle split. Training keeps only train-train edges; edges
// from a test document to a training document are recorded on the test side
// for test-time refinement.
std::pair<Corpus, Corpus> split_train_test(const Corpus& corpus,
                                           double test_frac,
                                           std::uint64_t seed);

// Near-equal fold assignment (values 0..folds-1), seeded permutation.
std::vector<int> assign_folds(std::size_t doc_count, int folds,
                              std::uint64_t seed);

// Train/test pair for one fold of a cross-validation.
std::pair<Corpus, Corpus> split_fold(const Corpus& corpus,
                                     const std::vector<int>& fold_of_doc,
                                     int fold);

}  // namespace scntm
