#include "scntm/pyp.hpp"

#include <cmath>
#include <stdexcept>

namespace scntm {

CountStore CountStore::dense(int size) {
  CountStore s;
  s.dense_ = true;
  s.c_.assign(size, 0);
  s.t_.assign(size, 0);
  return s;
}

CountStore CountStore::sparse() {
  CountStore s;
  s.dense_ = false;
  return s;
}

std::int32_t CountStore::customers(std::int32_t k) const {
  if (dense_) return c_[k];
  for (const Slot& s : slots_)
    if (s.key == k) return s.c;
  return 0;
}

std::int32_t CountStore::tables(std::int32_t k) const {
  if (dense_) return t_[k];
  for (const Slot& s : slots_)
    if (s.key == k) return s.t;
  return 0;
}

void CountStore::apply(std::int32_t k, int dc, int dt) {
  total_c_ += dc;
  total_t_ += dt;
  if (dense_) {
    c_[k] += dc;
    t_[k] += dt;
    if (c_[k] < 0 || t_[k] < 0)
      throw std::logic_error("CountStore: negative count");
    return;
  }
  for (Slot& s : slots_) {
    if (s.key == k) {
      s.c += dc;
      s.t += dt;
      if (s.c < 0 || s.t < 0)
        throw std::logic_error("CountStore: negative count");
      if (s.c == 0 && s.t == 0) {
        s = slots_.back();
        slots_.pop_back();
      }
      return;
    }
  }
  if (dc < 0 || dt < 0) throw std::logic_error("CountStore: missing slot");
  if (dc != 0 || dt != 0) slots_.push_back(Slot{k, dc, dt});
}

void CountStore::for_each(const std::function<void(std::int32_t, std::int32_t,
                                                   std::int32_t)>& fn) const {
  if (dense_) {
    for (std::size_t k = 0; k < c_.size(); ++k)
      if (c_[k] != 0 || t_[k] != 0)
        fn(static_cast<std::int32_t>(k), c_[k], t_[k]);
  } else {
    for (const Slot& s : slots_) fn(s.key, s.c, s.t);
  }
}

int CountStore::occupied_slots() const {
  if (!dense_) return static_cast<int>(slots_.size());
  int n = 0;
  for (std::int32_t c : c_) n += (c > 0);
  return n;
}

PypNode PypNode::gem_root(double discount, double concentration, int k_max,
                          StirlingCache* cache) {
  PypNode n;
  n.kind_ = NodeKind::kGemRoot;
  n.discount_ = discount;
  n.concentration_ = concentration;
  n.cache_ = cache;
  n.store_ = CountStore::dense(k_max);
  return n;
}

PypNode PypNode::pyp(double discount, double concentration, PypNode* parent,
                     StirlingCache* cache, int dense_size) {
  PypNode n;
  n.kind_ = NodeKind::kPyp;
  n.discount_ = discount;
  n.concentration_ = concentration;
  n.parent_ = parent;
  n.cache_ = cache;
  n.store_ = CountStore::dense(dense_size);
  return n;
}

PypNode PypNode::pyp_sparse(double discount, double concentration,
                            PypNode* parent, StirlingCache* cache) {
  PypNode n;
  n.kind_ = NodeKind::kPyp;
  n.discount_ = discount;
  n.concentration_ = concentration;
  n.parent_ = parent;
  n.cache_ = cache;
  n.store_ = CountStore::sparse();
  return n;
}

PypNode PypNode::pyp_uniform_base(double discount, double concentration,
                                  double base_prob, StirlingCache* cache,
                                  int dense_size) {
  PypNode n;
  n.kind_ = NodeKind::kPyp;
  n.discount_ = discount;
  n.concentration_ = concentration;
  n.base_prob_ = base_prob;
  n.cache_ = cache;
  n.store_ = CountStore::dense(dense_size);
  return n;
}

bool PypNode::sample_indicator(std::int32_t k, Rng& rng) const {
  std::int32_t c = customers(k);
  if (c < 1)
    throw std::invalid_argument("sample_indicator: no customer in slot");
  std::int32_t t = tables(k);
  return uniform01(rng) * c < static_cast<double>(t);
}

bool PypNode::add_customer(std::int32_t k, bool open_table) {
  std::int32_t c = customers(k);
  if (kind_ == NodeKind::kGemRoot) {
    bool opened = (c == 0);
    store_.apply(k, +1, opened ? +1 : 0);
    return opened;
  }
  if (c == 0 && !open_table)
    throw std::logic_error("add_customer: first customer must open a table");
  store_.apply(k, +1, open_table ? +1 : 0);
  return open_table;
}

bool PypNode::remove_customer(std::int32_t k, bool close_table) {
  std::int32_t c = customers(k);
  if (c < 1) throw std::logic_error("remove_customer: empty slot");
  if (kind_ == NodeKind::kGemRoot) {
    bool closed = (c == 1);
    store_.apply(k, -1, closed ? -1 : 0);
    return closed;
  }
  if (close_table && tables(k) < 1)
    throw std::logic_error("remove_customer: no table to close");
  store_.apply(k, -1, close_table ? -1 : 0);
  return close_table;
}

void PypNode::increment(std::int32_t k, Rng& rng) {
  std::int32_t c = customers(k);
  bool open = (c == 0) || sample_indicator(k, rng);
  increment(k, open, rng);
}

void PypNode::increment(std::int32_t k, bool add_table, Rng& rng) {
  bool opened = add_customer(k, add_table);
  if (opened && kind_ != NodeKind::kGemRoot && parent_ != nullptr)
    parent_->increment(k, rng);
}

void PypNode::decrement(std::int32_t k, Rng& rng) {
  bool close = sample_indicator(k, rng);
  decrement(k, close, rng);
}

void PypNode::decrement(std::int32_t k, bool remove_table, Rng& rng) {
  bool closed = remove_customer(k, remove_table);
  if (closed && kind_ != NodeKind::kGemRoot && parent_ != nullptr)
    parent_->decrement(k, rng);
}

double PypNode::log_f_totals() const {
  return log_pochhammer_stride(concentration_, discount_, total_tables()) -
         log_pochhammer(concentration_, total_customers());
}

double PypNode::log_f_slot(std::int32_t k) const {
  std::int32_t c = customers(k);
  if (c == 0) return 0.0;
  std::int32_t t = tables(k);
  return cache_->log_stirling(c, t) - log_binomial(c, t);
}

double PypNode::log_f() const {
  double total = log_f_totals();
  store_.for_each([&](std::int32_t k, std::int32_t c, std::int32_t t) {
    if (c == 0) return;
    total += cache_->log_stirling(c, t) - log_binomial(c, t);
  });
  return total;
}

double PypNode::parent_prob(std::int32_t k) const {
  if (parent_ != nullptr) return parent_->posterior_mean_at(k);
  if (kind_ == NodeKind::kGemRoot)
    return 1.0 / static_cast<double>(store_.dense_size());
  return base_prob_;
}

double PypNode::posterior_mean_at(std::int32_t k) const {
  double a = discount_, b = concentration_;
  double T = static_cast<double>(total_tables());
  double C = static_cast<double>(total_customers());
  return ((a * T + b) * parent_prob(k) + customers(k) - a * tables(k)) /
         (b + C);
}

void PypNode::posterior_mean(std::vector<double>& out) const {
  if (!store_.dense())
    throw std::logic_error("posterior_mean: dense nodes only");
  int n = store_.dense_size();
  std::vector<double> base;
  if (parent_ != nullptr) {
    parent_->posterior_mean(base);
  } else {
    double p = kind_ == NodeKind::kGemRoot ? 1.0 / n : base_prob_;
    base.assign(n, p);
  }
  out.resize(n);
  double a = discount_, b = concentration_;
  double T = static_cast<double>(total_tables());
  double C = static_cast<double>(total_customers());
  for (int k = 0; k < n; ++k)
    out[k] = ((a * T + b) * base[k] + customers(k) - a * tables(k)) / (b + C);
}

void PypNode::restore_slot(std::int32_t k, std::int32_t c, std::int32_t t) {
  if (customers(k) != 0 || tables(k) != 0)
    throw std::logic_error("restore_slot: slot not empty");
  if (c < 0 || t < 0 || t > c || ((t == 0) != (c == 0)))
    throw std::logic_error("restore_slot: invalid counts");
  store_.apply(k, c, t);
}

void posterior_mean_with_parent(const PypNode& node,
                                std::span<const double> parent,
                                std::vector<double>& out) {
  const int n = static_cast<int>(parent.size());
  out.resize(n);
  double a = node.discount(), b = node.concentration();
  double T = static_cast<double>(node.total_tables());
  double C = static_cast<double>(node.total_customers());
  for (int k = 0; k < n; ++k)
    out[k] = ((a * T + b) * parent[k] + node.customers(k) - a * node.tables(k)) /
             (b + C);
}

void PypNode::check_invariants() const {
  std::int64_t sum_c = 0, sum_t = 0;
  bool ok = true;
  store_.for_each([&](std::int32_t, std::int32_t c, std::int32_t t) {
    sum_c += c;
    sum_t += t;
    if (t > c || (t == 0) != (c == 0)) ok = false;
    if (kind_ == NodeKind::kGemRoot && c > 0 && t != 1) ok = false;
  });
  if (!ok || sum_c != total_customers() || sum_t != total_tables())
    throw std::logic_error("PypNode: count invariants violated");
}

}  // namespace scntm
