#include "scntm/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scntm {

ScntmModel::ScntmModel(std::shared_ptr<const Corpus> corpus,
                       const ModelConfig& cfg, std::uint64_t seed)
    : corpus_(std::move(corpus)),
      cfg_(cfg),
      cache_topic_(cfg.discount_topic),
      cache_word_(cfg.discount_word) {
  if (cfg_.k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  if (!corpus_->finalized())
    throw std::invalid_argument("model requires a finalized corpus");

  const int D = doc_count();
  const int K = cfg_.k_max;
  const int V = vocab_size();
  const auto& docs = corpus_->docs();

  for (int f = 0; f < kFamilyCount; ++f)
    family_beta_[f] = cfg_.concentration_init;

  docs_per_author_.assign(corpus_->authors().size(), 0);
  for (const Document& d : docs)
    if (d.author) ++docs_per_author_[*d.author];

  // topic side: theta_d -> theta'_d -> nu_b -> mu
  mu_ = PypNode::gem_root(cfg_.discount_topic, cfg_.concentration_init, K,
                          &cache_topic_);
  const int B = static_cast<int>(corpus_->authors().size() +
                                 corpus_->categories().size()) +
                1;  // + the shared missing-author node
  nu_.reserve(B);
  for (int b = 0; b < B; ++b)
    nu_.push_back(PypNode::pyp(cfg_.discount_topic, cfg_.concentration_init,
                               &mu_, &cache_topic_, K));
  b_of_.resize(D);
  for (int d = 0; d < D; ++d)
    b_of_[d] = resolve_b(docs[d].author, docs[d].category, docs[d].id);

  theta_prime_.reserve(D);
  theta_.reserve(D);
  for (int d = 0; d < D; ++d) {
    theta_prime_.push_back(PypNode::pyp(cfg_.discount_topic,
                                        cfg_.concentration_init,
                                        &nu_[b_of_[d]], &cache_topic_, K));
  }
  for (int d = 0; d < D; ++d)
    theta_.push_back(PypNode::pyp(cfg_.discount_topic, cfg_.concentration_init,
                                  &theta_prime_[d], &cache_topic_, K));

  // word side: phi'_dk -> phi_k -> gamma -> uniform base
  gamma_ = PypNode::pyp_uniform_base(cfg_.discount_word,
                                     cfg_.concentration_init,
                                     V > 0 ? 1.0 / V : 1.0, &cache_word_, V);
  phi_.reserve(K);
  for (int k = 0; k < K; ++k)
    phi_.push_back(PypNode::pyp(cfg_.discount_word, cfg_.concentration_init,
                                &gamma_, &cache_word_, V));
  phi_prime_.reserve(static_cast<std::size_t>(D) * K);
  for (int d = 0; d < D; ++d)
    for (int k = 0; k < K; ++k)
      phi_prime_.push_back(PypNode::pyp_sparse(cfg_.discount_word,
                                               cfg_.concentration_init,
                                               &phi_[k], &cache_word_));

  tokens_.resize(D);
  title_len_.resize(D);
  z_.resize(D);
  for (int d = 0; d < D; ++d) {
    tokens_[d] = docs[d].all_tokens();
    title_len_[d] = docs[d].title_tokens.size();
  }

  edges_ = corpus_->citations();
  y_.assign(edges_.size(), -1);
  h_.assign(static_cast<std::size_t>(D) * K, 0);
  edge_topic_count_.assign(K, 0);
  g_plus_.assign(D, 0);
  g_minus_.assign(D, 0);
  for (const Edge& e : edges_) {
    ++g_plus_[e.first];
    ++g_minus_[e.second];
  }
  lambda_plus_.assign(D, 1.0);
  lambda_minus_.assign(D, 1.0);
  lambda_topic_.assign(K, 1.0);

  init_assignments(seed);
}

bool ScntmModel::significance(std::int32_t author) const {
  if (author < 0 || author >= static_cast<std::int32_t>(docs_per_author_.size()))
    return cfg_.eta == 0;  // unknown author: zero publications
  if (cfg_.eta == kEtaInf) return false;
  return static_cast<std::uint64_t>(docs_per_author_[author]) >= cfg_.eta;
}

int ScntmModel::resolve_b(const std::optional<std::int32_t>& author,
                          const std::optional<std::int32_t>& category,
                          const std::string& doc_id) const {
  const int A = static_cast<int>(corpus_->authors().size());
  const int E = static_cast<int>(corpus_->categories().size());
  bool author_significant = author ? significance(*author) : (cfg_.eta == 0);
  if (author_significant)
    return author ? nu_index_of_author(*author) : A + E;  // shared node
  if (category) return nu_index_of_category(*category);
  throw std::runtime_error("document " + doc_id +
                           ": no significant author and no category label");
}

void ScntmModel::init_assignments(std::uint64_t seed) {
  Rng rng(seed);
  const int K = cfg_.k_max;
  for (int d = 0; d < doc_count(); ++d) {
    const auto& toks = tokens_[d];
    z_[d].resize(toks.size());
    for (std::size_t n = 0; n < toks.size(); ++n) {
      auto k = static_cast<std::int16_t>(K == 1 ? 0 : rng() % K);
      z_[d][n] = k;
      theta_[d].increment(k, rng);
      phi_prime(d, k).increment(toks[n], rng);
    }
  }
  // citing topics start at the citing document's dominant topic; the network
  // counts themselves enter theta' only once the network component activates
  std::vector<double> mean;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    theta_prime_mean(edges_[e].first, mean);
    y_[e] = static_cast<std::int16_t>(
        std::max_element(mean.begin(), mean.end()) - mean.begin());
  }
}

void ScntmModel::activate_network(Rng& rng) {
  if (network_active_) return;
  network_active_ = true;
  std::vector<double> mean;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    auto [i, j] = edges_[e];
    theta_prime_mean(i, mean);
    auto k = static_cast<std::int16_t>(
        std::max_element(mean.begin(), mean.end()) - mean.begin());
    y_[e] = k;
    theta_prime_[i].increment(k, rng);
    theta_prime_[j].increment(k, rng);
    network_count_ref(i, k) += 1;
    network_count_ref(j, k) += 1;
    ++edge_topic_count_[k];
  }
}

void ScntmModel::set_family_concentration(Family f, double beta) {
  family_beta_[f] = beta;
  for (PypNode* n : family_nodes(f)) n->set_concentration(beta);
}

std::vector<PypNode*> ScntmModel::family_nodes(Family f) {
  std::vector<PypNode*> out;
  switch (f) {
    case kFamilyMu:
      out.push_back(&mu_);
      break;
    case kFamilyNu:
      for (auto& n : nu_) out.push_back(&n);
      break;
    case kFamilyThetaP:
      for (auto& n : theta_prime_) out.push_back(&n);
      break;
    case kFamilyTheta:
      for (auto& n : theta_) out.push_back(&n);
      break;
    case kFamilyGamma:
      out.push_back(&gamma_);
      break;
    case kFamilyPhi:
      for (auto& n : phi_) out.push_back(&n);
      break;
    case kFamilyPhiP:
      for (auto& n : phi_prime_) out.push_back(&n);
      break;
    default:
      throw std::invalid_argument("bad family");
  }
  return out;
}

double ScntmModel::log_joint_topic() const {
  double total = mu_.log_f() + gamma_.log_f();
  total += static_cast<double>(gamma_.total_tables()) *
           std::log(gamma_.base_prob());
  for (const auto& n : nu_) total += n.log_f();
  for (const auto& n : theta_prime_) total += n.log_f();
  for (const auto& n : theta_) total += n.log_f();
  for (const auto& n : phi_) total += n.log_f();
  for (const auto& n : phi_prime_) total += n.log_f();
  return total;
}

double ScntmModel::log_joint() const {
  double total = log_joint_topic();
  if (!network_active_) return total;
  const int D = doc_count();
  const int K = cfg_.k_max;
  for (int d = 0; d < D; ++d) {
    total += g_plus_[d] * std::log(lambda_plus_[d]);
    total += g_minus_[d] * std::log(lambda_minus_[d]);
  }
  std::vector<double> mean;
  std::vector<double> s_plus(K, 0.0), s_minus(K, 0.0);
  for (int d = 0; d < D; ++d) {
    theta_prime_mean(d, mean);
    for (int k = 0; k < K; ++k) {
      s_plus[k] += lambda_plus_[d] * mean[k];
      s_minus[k] += lambda_minus_[d] * mean[k];
    }
  }
  for (int k = 0; k < K; ++k) {
    total += edge_topic_count_[k] * std::log(lambda_topic_[k]);
    total -= lambda_topic_[k] * s_plus[k] * s_minus[k];
  }
  return total;
}

void ScntmModel::theta_prime_mean(int d, std::vector<double>& out) const {
  theta_prime_[d].posterior_mean(out);
}

void ScntmModel::check_consistency() const {
  const int D = doc_count();
  const int K = cfg_.k_max;

  auto fail = [](const std::string& what) {
    throw std::logic_error("model consistency: " + what);
  };

  mu_.check_invariants();
  gamma_.check_invariants();
  for (const auto& n : nu_) n.check_invariants();
  for (const auto& n : theta_) n.check_invariants();
  for (const auto& n : theta_prime_) n.check_invariants();
  for (const auto& n : phi_) n.check_invariants();
  for (const auto& n : phi_prime_) n.check_invariants();

  // c^theta_d from Z
  for (int d = 0; d < D; ++d) {
    std::vector<std::int32_t> cnt(K, 0);
    for (std::int16_t k : z_[d]) ++cnt[k];
    for (int k = 0; k < K; ++k)
      if (theta_[d].customers(k) != cnt[k]) fail("theta counts != Z recount");
  }
  // network counts from Y
  std::vector<std::int32_t> h_expect(static_cast<std::size_t>(D) * K, 0);
  std::vector<std::int32_t> per_topic(K, 0);
  if (network_active_) {
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      auto [i, j] = edges_[e];
      h_expect[i * K + y_[e]] += 1;
      h_expect[j * K + y_[e]] += 1;
      per_topic[y_[e]] += 1;
    }
  }
  for (int k = 0; k < K; ++k)
    if (per_topic[k] != edge_topic_count_[k]) fail("edge topic counts");
  for (int d = 0; d < D; ++d)
    for (int k = 0; k < K; ++k) {
      if (h_expect[d * K + k] != network_count(d, k)) fail("h counts != Y");
      if (theta_prime_[d].customers(k) !=
          theta_[d].tables(k) + network_count(d, k))
        fail("c^theta' != t^theta + h");
    }
  // parent-child sums
  std::vector<std::int64_t> sum(K);
  for (int b = 0; b < static_cast<int>(nu_.size()); ++b) {
    std::fill(sum.begin(), sum.end(), 0);
    for (int d = 0; d < D; ++d)
      if (b_of_[d] == b)
        for (int k = 0; k < K; ++k) sum[k] += theta_prime_[d].tables(k);
    for (int k = 0; k < K; ++k)
      if (nu_[b].customers(k) != sum[k]) fail("c^nu != sum t^theta'");
  }
  std::fill(sum.begin(), sum.end(), 0);
  for (const auto& n : nu_)
    for (int k = 0; k < K; ++k) sum[k] += n.tables(k);
  for (int k = 0; k < K; ++k)
    if (mu_.customers(k) != sum[k]) fail("c^mu != sum t^nu");

  const int V = vocab_size();
  std::vector<std::int64_t> wsum(V);
  for (int k = 0; k < K; ++k) {
    std::fill(wsum.begin(), wsum.end(), 0);
    for (int d = 0; d < D; ++d)
      phi_prime(d, k).store().for_each(
          [&](std::int32_t w, std::int32_t, std::int32_t t) { wsum[w] += t; });
    for (int w = 0; w < V; ++w)
      if (phi_[k].customers(w) != wsum[w]) fail("c^phi != sum t^phi'");
  }
  std::fill(wsum.begin(), wsum.end(), 0);
  for (const auto& n : phi_)
    for (int w = 0; w < V; ++w) wsum[w] += n.tables(w);
  for (int w = 0; w < V; ++w)
    if (gamma_.customers(w) != wsum[w]) fail("c^gamma != sum t^phi");

  // phi' customers against Z/W
  for (int d = 0; d < D; ++d) {
    for (int k = 0; k < K; ++k) {
      std::int64_t expect = 0;
      for (std::size_t n = 0; n < z_[d].size(); ++n) expect += (z_[d][n] == k);
      if (phi_prime(d, k).total_customers() != expect)
        fail("phi' totals != Z/W recount");
    }
  }
  if (active_topics() > cfg_.k_max) fail("active topics exceed cap");
}

}  // namespace scntm
