#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "scntm/corpus.hpp"
#include "scntm/pyp.hpp"
#include "scntm/rng.hpp"

namespace scntm {

// Author threshold value meaning full supervision.
inline constexpr std::uint64_t kEtaInf = ~std::uint64_t{0};

struct ModelConfig {
  int k_max = 20;
  std::uint64_t eta = 0;
  double discount_topic = 0.01;  // mu, nu, theta', theta
  double discount_word = 0.7;    // gamma, phi, phi'
  double concentration_init = 0.1;
  // hyperprior constants (Gamma shapes/rates for beta and lambda)
  double tau0 = 1.0, tau1 = 1.0, eps0 = 1.0, eps1 = 1.0;
};

// Node families sharing one sampled concentration parameter.
enum Family : int {
  kFamilyMu = 0,
  kFamilyNu,
  kFamilyThetaP,
  kFamilyTheta,
  kFamilyGamma,
  kFamilyPhi,
  kFamilyPhiP,
  kFamilyCount
};

// The assembled SCNTM state: the PYP node graph over topics and words, the
// topic assignment of every token, citing topics and rate parameters of the
// citation network, and the supervision wiring through the author threshold.
//
// One instance is owned by exactly one sampling chain; nothing here is
// thread-safe under mutation.
class ScntmModel {
 public:
  ScntmModel(std::shared_ptr<const Corpus> corpus, const ModelConfig& cfg,
             std::uint64_t seed);
  // nodes hold pointers into sibling containers
  ScntmModel(const ScntmModel&) = delete;
  ScntmModel& operator=(const ScntmModel&) = delete;

  const Corpus& corpus() const { return *corpus_; }
  const ModelConfig& config() const { return cfg_; }
  int k_max() const { return cfg_.k_max; }
  int vocab_size() const { return static_cast<int>(corpus_->vocab().size()); }
  int doc_count() const { return static_cast<int>(corpus_->doc_count()); }
  int active_topics() const { return static_cast<int>(mu_.total_tables()); }

  // --- supervision ---
  // 1 iff the author has at least eta documents; a missing author counts as
  // zero documents, so it is significant only when eta = 0.
  bool significance(std::int32_t author) const;
  // nu index parenting document d (author, category, or the shared
  // missing-author node), fixed for the whole run.
  int b_of(int d) const { return b_of_[d]; }
  // resolves the nu index for an arbitrary author/category pair (test docs)
  int resolve_b(const std::optional<std::int32_t>& author,
                const std::optional<std::int32_t>& category,
                const std::string& doc_id) const;
  int nu_count() const { return static_cast<int>(nu_.size()); }
  int nu_index_of_author(std::int32_t a) const { return a; }
  int nu_index_of_category(std::int32_t e) const {
    return static_cast<int>(corpus_->authors().size()) + e;
  }

  // --- nodes ---
  PypNode& mu() { return mu_; }
  PypNode& nu(int b) { return nu_[b]; }
  PypNode& theta_prime(int d) { return theta_prime_[d]; }
  PypNode& theta(int d) { return theta_[d]; }
  PypNode& gamma() { return gamma_; }
  PypNode& phi(int k) { return phi_[k]; }
  PypNode& phi_prime(int d, int k) { return phi_prime_[d * cfg_.k_max + k]; }
  const PypNode& mu() const { return mu_; }
  const PypNode& theta_prime(int d) const { return theta_prime_[d]; }
  const PypNode& theta(int d) const { return theta_[d]; }
  const PypNode& gamma() const { return gamma_; }
  const PypNode& phi(int k) const { return phi_[k]; }
  const PypNode& phi_prime(int d, int k) const {
    return phi_prime_[d * cfg_.k_max + k];
  }
  const PypNode& nu(int b) const { return nu_[b]; }

  StirlingCache& topic_cache() { return cache_topic_; }
  StirlingCache& word_cache() { return cache_word_; }

  // --- latent state ---
  const std::vector<std::int32_t>& tokens(int d) const { return tokens_[d]; }
  std::size_t title_len(int d) const { return title_len_[d]; }
  std::vector<std::int16_t>& z(int d) { return z_[d]; }
  const std::vector<std::int16_t>& z(int d) const { return z_[d]; }

  // --- citation network ---
  using Edge = std::pair<std::int32_t, std::int32_t>;
  const std::vector<Edge>& edges() const { return edges_; }
  std::vector<std::int16_t>& citing_topics() { return y_; }
  const std::vector<std::int16_t>& citing_topics() const { return y_; }
  bool network_active() const { return network_active_; }
  std::int32_t network_count(int d, int k) const {
    return h_[d * cfg_.k_max + k];
  }
  std::int32_t& network_count_ref(int d, int k) {
    return h_[d * cfg_.k_max + k];
  }
  std::vector<std::int32_t>& edge_topic_counts() { return edge_topic_count_; }
  std::int32_t g_plus(int d) const { return g_plus_[d]; }
  std::int32_t g_minus(int d) const { return g_minus_[d]; }
  std::vector<double>& lambda_plus() { return lambda_plus_; }
  std::vector<double>& lambda_minus() { return lambda_minus_; }
  std::vector<double>& lambda_topic() { return lambda_topic_; }
  const std::vector<double>& lambda_plus() const { return lambda_plus_; }
  const std::vector<double>& lambda_minus() const { return lambda_minus_; }
  const std::vector<double>& lambda_topic() const { return lambda_topic_; }

  // Assigns every citation the dominant topic of the citing document and
  // inserts the network customers into the theta' nodes. Called by the
  // sampler when the network component switches on.
  void activate_network(Rng& rng);

  // --- hyperparameters ---
  double family_concentration(Family f) const { return family_beta_[f]; }
  void set_family_concentration(Family f, double beta);
  std::vector<PypNode*> family_nodes(Family f);

  // --- likelihood and diagnostics ---
  // Topic-model part: sum of log f over all nodes plus the uniform-base term
  // for the word root.
  double log_joint_topic() const;
  // Adds the network factor (lambda powers and the exponential penalty at the
  // posterior-mean theta') when the network is active.
  double log_joint() const;

  // Posterior-mean theta' of document d through the live nu/mu chain.
  void theta_prime_mean(int d, std::vector<double>& out) const;

  // Full recount of Z and Y against every node's counts; throws on mismatch.
  void check_consistency() const;

 private:
  void init_assignments(std::uint64_t seed);

  std::shared_ptr<const Corpus> corpus_;
  ModelConfig cfg_;
  StirlingCache cache_topic_;
  StirlingCache cache_word_;

  PypNode mu_, gamma_;
  std::vector<PypNode> nu_, theta_prime_, theta_, phi_, phi_prime_;
  double family_beta_[kFamilyCount];

  std::vector<std::vector<std::int32_t>> tokens_;
  std::vector<std::size_t> title_len_;
  std::vector<std::vector<std::int16_t>> z_;

  std::vector<Edge> edges_;
  std::vector<std::int16_t> y_;
  std::vector<std::int32_t> h_;
  std::vector<std::int32_t> edge_topic_count_;
  std::vector<std::int32_t> g_plus_, g_minus_;
  std::vector<double> lambda_plus_, lambda_minus_, lambda_topic_;
  bool network_active_ = false;

  std::vector<std::int64_t> docs_per_author_;
  std::vector<int> b_of_;
};

}  // namespace scntm
