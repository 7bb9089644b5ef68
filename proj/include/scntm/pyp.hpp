#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "scntm/rng.hpp"
#include "scntm/stirling.hpp"

namespace scntm {

enum class NodeKind : std::uint8_t { kGemRoot, kPyp };

// Per-slot customer/table counts. Topic nodes and per-topic word nodes are
// dense; per-document-per-topic word nodes touch only a handful of words each
// and use an unsorted slot list instead.
class CountStore {
 public:
  static CountStore dense(int size);
  static CountStore sparse();

  std::int32_t customers(std::int32_t k) const;
  std::int32_t tables(std::int32_t k) const;
  std::int64_t total_customers() const { return total_c_; }
  std::int64_t total_tables() const { return total_t_; }

  // dc/dt in {-1, 0, +1}; keeps totals in sync and drops empty sparse slots.
  void apply(std::int32_t k, int dc, int dt);

  void for_each(const std::function<void(std::int32_t, std::int32_t,
                                         std::int32_t)>& fn) const;
  int occupied_slots() const;
  bool dense() const { return dense_; }
  int dense_size() const { return static_cast<int>(c_.size()); }

 private:
  bool dense_ = true;
  std::vector<std::int32_t> c_, t_;  // dense storage
  struct Slot {
    std::int32_t key, c, t;
  };
  std::vector<Slot> slots_;  // sparse storage
  std::int64_t total_c_ = 0, total_t_ = 0;
};

class PypNode;

// Eq-21 style posterior mean with an explicitly supplied parent vector
// (snapshots during network sweeps use this instead of the live chain).
void posterior_mean_with_parent(const PypNode& node,
                                std::span<const double> parent,
                                std::vector<double>& out);

// One probability vector of the hierarchy, collapsed to customer/table
// counts. A node sees its parent either as another node or, for the word
// root, as a fixed uniform base probability. The GEM root keeps the
// degenerate convention t_k = 1 whenever c_k > 0.
class PypNode {
 public:
  PypNode() = default;

  static PypNode gem_root(double discount, double concentration, int k_max,
                          StirlingCache* cache);
  static PypNode pyp(double discount, double concentration, PypNode* parent,
                     StirlingCache* cache, int dense_size);
  static PypNode pyp_sparse(double discount, double concentration,
                            PypNode* parent, StirlingCache* cache);
  // root over a fixed uniform base (the word root gamma; base 1/|V|)
  static PypNode pyp_uniform_base(double discount, double concentration,
                                  double base_prob, StirlingCache* cache,
                                  int dense_size);

  NodeKind kind() const { return kind_; }
  double discount() const { return discount_; }
  double concentration() const { return concentration_; }
  void set_concentration(double b) { concentration_ = b; }
  PypNode* parent() const { return parent_; }
  double base_prob() const { return base_prob_; }
  StirlingCache* cache() const { return cache_; }

  std::int32_t customers(std::int32_t k) const { return store_.customers(k); }
  std::int32_t tables(std::int32_t k) const { return store_.tables(k); }
  std::int64_t total_customers() const { return store_.total_customers(); }
  std::int64_t total_tables() const { return store_.total_tables(); }
  const CountStore& store() const { return store_; }

  // Bernoulli(t_k / c_k): did this customer contribute a table? c_k >= 1.
  bool sample_indicator(std::int32_t k, Rng& rng) const;

  // Single-level count updates; no cascade. The first customer in a slot
  // must open a table, and a GEM root derives its table from the customer
  // count. Both return whether the table count changed.
  bool add_customer(std::int32_t k, bool open_table);
  bool remove_customer(std::int32_t k, bool close_table);

  // Cascading updates (a table change here is a customer change at the
  // parent). Table decisions at ancestors follow the indicator rule: forced
  // open on an empty slot, else Bernoulli(t/c). The two-argument forms decide
  // this level by the same rule.
  void increment(std::int32_t k, Rng& rng);
  void increment(std::int32_t k, bool add_table, Rng& rng);
  void decrement(std::int32_t k, Rng& rng);
  void decrement(std::int32_t k, bool remove_table, Rng& rng);

  // log f(N) of the marginalised node likelihood, Boolean-indicator form:
  //   (b|a)_T / (b)_C  *  prod_k  S^{c_k}_{t_k,a} / C(c_k, t_k).
  double log_f() const;

  // Totals part and one slot's part of log_f, for incremental ratios.
  double log_f_totals() const;
  double log_f_slot(std::int32_t k) const;

  // Posterior mean (recovers the collapsed probability vector):
  //   N_k = ((a T + b) P_k + c_k - a t_k) / (b + C).
  // Only defined for dense nodes; `out` is resized to the dense size.
  void posterior_mean(std::vector<double>& out) const;

  // Point query of the posterior mean, following the parent chain.
  double posterior_mean_at(std::int32_t k) const;

  // Internal-consistency check of the per-slot invariants.
  void check_invariants() const;

  // Installs counts into an empty slot (checkpoint restore).
  void restore_slot(std::int32_t k, std::int32_t c, std::int32_t t);

 private:
  double parent_prob(std::int32_t k) const;

  NodeKind kind_ = NodeKind::kPyp;
  double discount_ = 0.0;
  double concentration_ = 1.0;
  double base_prob_ = 0.0;  // uniform base for a parentless PYP node
  PypNode* parent_ = nullptr;
  StirlingCache* cache_ = nullptr;
  CountStore store_;
};

}  // namespace scntm
