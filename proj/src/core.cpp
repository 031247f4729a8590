#include "acs/core.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

#include "acs/rng.hpp"

namespace acs {

namespace {

constexpr int kMaxFamilySize = 100000;
constexpr int kDistCacheMax = 2048;

int ceil_log2(int x) {
  // x >= 1; ceil(log2(x)) = bit_width(x - 1)
  return x <= 1 ? 0 : std::bit_width(static_cast<unsigned>(x - 1));
}

int clamp_weight(int v, int cap) { return std::max(1, std::min(v, cap)); }

}  // namespace

ItemSet make_item_set(int n, std::span<const int> zero_based) {
  ItemSet s(n);
  for (int i : zero_based) {
    if (i < 0 || i >= n) throw std::out_of_range("make_item_set: index out of range");
    s.set(i);
  }
  return s;
}

std::vector<int> items_of(const ItemSet& s) {
  std::vector<int> out;
  out.reserve(s.count());
  for (auto i = s.find_first(); i != ItemSet::npos; i = s.find_next(i))
    out.push_back(static_cast<int>(i));
  return out;
}

Instance Instance::stochastic(std::vector<double> eta) {
  Instance inst;
  inst.n = static_cast<int>(eta.size());
  inst.eta = std::move(eta);
  inst.noise_mode = NoiseMode::Stochastic;
  inst.validate();
  return inst;
}

Instance Instance::persistent(std::vector<double> eta, std::uint64_t realize_seed) {
  Instance inst;
  inst.n = static_cast<int>(eta.size());
  inst.eta = std::move(eta);
  inst.noise_mode = NoiseMode::Persistent;
  Rng rng(realize_seed);
  std::vector<int> labels(inst.n);
  for (int i = 0; i < inst.n; ++i) {
    double e = inst.eta[i];
    labels[i] = (e == 0.0 || e == 1.0) ? static_cast<int>(e) : rng.bernoulli(e);
  }
  inst.realized_labels = std::move(labels);
  inst.validate();
  return inst;
}

Instance Instance::persistent_labels(std::vector<int> labels) {
  Instance inst;
  inst.n = static_cast<int>(labels.size());
  inst.eta.resize(inst.n);
  for (int i = 0; i < inst.n; ++i) inst.eta[i] = labels[i];
  inst.noise_mode = NoiseMode::Persistent;
  inst.realized_labels = std::move(labels);
  inst.validate();
  return inst;
}

void Instance::validate() const {
  if (n < 1) throw std::invalid_argument("Instance: n must be >= 1");
  if (static_cast<int>(eta.size()) != n) throw std::invalid_argument("Instance: eta size mismatch");
  for (double e : eta)
    if (!(e >= 0.0 && e <= 1.0)) throw std::invalid_argument("Instance: eta outside [0,1]");
  if (noise_mode == NoiseMode::Persistent) {
    if (!realized_labels) throw std::invalid_argument("Instance: persistent mode needs realized labels");
    if (static_cast<int>(realized_labels->size()) != n)
      throw std::invalid_argument("Instance: realized label size mismatch");
    for (int i = 0; i < n; ++i) {
      int y = (*realized_labels)[i];
      if (y != 0 && y != 1) throw std::invalid_argument("Instance: realized labels must be 0/1");
      if ((eta[i] == 0.0 || eta[i] == 1.0) && y != static_cast<int>(eta[i]))
        throw std::invalid_argument("Instance: deterministic eta must realize to itself");
    }
  } else if (realized_labels) {
    throw std::invalid_argument("Instance: stochastic mode must not carry realized labels");
  }
}

PolicyFamily PolicyFamily::thresholds(int n, WeightMode wm) {
  if (n < 1) throw std::invalid_argument("thresholds: n must be >= 1");
  PolicyFamily fam;
  fam.kind_ = FamilyKind::Thresholds;
  fam.weight_mode_ = wm;
  fam.n_ = n;
  fam.policies_.reserve(n);
  ItemSet cur(n);
  for (int k = 0; k < n; ++k) {
    cur.set(k);
    fam.policies_.push_back(cur);
  }
  fam.finalize();
  return fam;
}

PolicyFamily PolicyFamily::intervals(int n, WeightMode wm) {
  if (n < 1) throw std::invalid_argument("intervals: n must be >= 1");
  PolicyFamily fam;
  fam.kind_ = FamilyKind::Intervals;
  fam.weight_mode_ = wm;
  fam.n_ = n;
  if (static_cast<long>(n) * (n + 1) / 2 > kMaxFamilySize)
    throw std::invalid_argument("intervals: family too large");
  for (int len = 1; len <= n; ++len)
    for (int a = 0; a + len <= n; ++a) {
      ItemSet s(n);
      for (int i = a; i < a + len; ++i) s.set(i);
      fam.policies_.push_back(std::move(s));
      fam.bounds_.emplace_back(a, a + len - 1);
    }
  fam.finalize();
  return fam;
}

PolicyFamily PolicyFamily::explicit_sets(int n, const std::vector<std::vector<int>>& one_based,
                                         WeightMode wm) {
  std::vector<ItemSet> sets;
  sets.reserve(one_based.size());
  for (const auto& lst : one_based) {
    ItemSet s(n);
    for (int item : lst) {
      if (item < 1 || item > n) throw std::invalid_argument("explicit_sets: item out of range");
      s.set(item - 1);
    }
    sets.push_back(std::move(s));
  }
  return explicit_bitsets(n, std::move(sets), wm);
}

PolicyFamily PolicyFamily::explicit_bitsets(int n, std::vector<ItemSet> sets, WeightMode wm) {
  if (n < 1) throw std::invalid_argument("explicit_sets: n must be >= 1");
  if (sets.empty()) throw std::invalid_argument("explicit_sets: family must be nonempty");
  if (static_cast<int>(sets.size()) > kMaxFamilySize)
    throw std::invalid_argument("explicit_sets: family too large");
  std::set<ItemSet> seen;
  for (const auto& s : sets) {
    if (s.size() != static_cast<std::size_t>(n))
      throw std::invalid_argument("explicit_sets: set width mismatch");
    if (s.none()) throw std::invalid_argument("explicit_sets: empty policy not allowed");
    if (!seen.insert(s).second) throw std::invalid_argument("explicit_sets: duplicate policy");
  }
  PolicyFamily fam;
  fam.kind_ = FamilyKind::Explicit;
  fam.weight_mode_ = wm;
  fam.n_ = n;
  fam.policies_ = std::move(sets);
  fam.finalize();
  return fam;
}

void PolicyFamily::finalize() {
  const int m = size();
  sizes_.resize(m);
  size_count_.assign(n_ + 1, 0);
  for (int i = 0; i < m; ++i) {
    sizes_[i] = static_cast<int>(policies_[i].count());
    ++size_count_[sizes_[i]];
  }
  if (kind_ == FamilyKind::Explicit && m <= kDistCacheMax) {
    dist_.assign(m, std::vector<std::uint16_t>(m, 0));
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        auto d = static_cast<std::uint16_t>((policies_[a] ^ policies_[b]).count());
        dist_[a][b] = d;
        dist_[b][a] = d;
      }
  }
}

const ItemSet& PolicyFamily::policy(int id) const {
  if (id < 0 || id >= size()) throw std::out_of_range("PolicyFamily: bad policy id");
  return policies_[id];
}

int PolicyFamily::policy_size(int id) const {
  if (id < 0 || id >= size()) throw std::out_of_range("PolicyFamily: bad policy id");
  return sizes_[id];
}

int PolicyFamily::symdiff_size(int a, int b) const {
  if (a < 0 || a >= size() || b < 0 || b >= size())
    throw std::out_of_range("symdiff_size: bad policy id");
  if (a == b) return 0;
  switch (kind_) {
    case FamilyKind::Thresholds:
      return std::abs(a - b);
    case FamilyKind::Intervals: {
      auto [a1, b1] = bounds_[a];
      auto [a2, b2] = bounds_[b];
      int overlap = std::max(0, std::min(b1, b2) - std::max(a1, a2) + 1);
      return sizes_[a] + sizes_[b] - 2 * overlap;
    }
    case FamilyKind::Explicit:
      if (!dist_.empty()) return dist_[a][b];
      return static_cast<int>((policies_[a] ^ policies_[b]).count());
  }
  return 0;
}

bool PolicyFamily::is_strict_subset(int a, int b) const {
  if (a < 0 || a >= size() || b < 0 || b >= size())
    throw std::out_of_range("is_strict_subset: bad policy id");
  if (a == b) return false;
  switch (kind_) {
    case FamilyKind::Thresholds:
      return a < b;
    case FamilyKind::Intervals: {
      auto [a1, b1] = bounds_[a];
      auto [a2, b2] = bounds_[b];
      return a2 <= a1 && b1 <= b2 && sizes_[a] < sizes_[b];
    }
    case FamilyKind::Explicit:
      return policies_[a].is_proper_subset_of(policies_[b]);
  }
  return false;
}

int PolicyFamily::b1_count(int sz) const {
  if (sz < 0 || sz > n_) return 0;
  return size_count_[sz];
}

int PolicyFamily::b2_count(int dist, int anchor) const {
  if (anchor < 0 || anchor >= size()) throw std::out_of_range("b2_count: bad anchor");
  if (dist <= 0) return 0;
  if (kind_ == FamilyKind::Thresholds) {
    int k = anchor + 1;  // 1-based prefix length
    return (k - dist >= 1 ? 1 : 0) + (k + dist <= n_ ? 1 : 0);
  }
  int count = 0;
  for (int b = 0; b < size(); ++b)
    if (b != anchor && symdiff_size(anchor, b) == dist) ++count;
  return count;
}

int PolicyFamily::sauer_single(int id) const {
  return ceil_log2(std::max(b1_count(sizes_[id]), 2));
}

double PolicyFamily::complexity_single(int id) const {
  if (id < 0 || id >= size()) throw std::out_of_range("complexity_single: bad policy id");
  int v;
  if (weight_mode_ == WeightMode::AnalyticVC && kind_ == FamilyKind::Thresholds)
    v = 1;
  else if (weight_mode_ == WeightMode::AnalyticVC && kind_ == FamilyKind::Intervals)
    v = 2;
  else
    v = sauer_single(id);  // explicit families have no closed form; count instead
  return clamp_weight(v, sizes_[id]);
}

double PolicyFamily::complexity_pair(int a, int b) const {
  if (a < 0 || a >= size() || b < 0 || b >= size())
    throw std::out_of_range("complexity_pair: bad policy id");
  if (a == b) throw std::invalid_argument("complexity_pair: identical policies");
  const int d = symdiff_size(a, b);
  int v;
  if (weight_mode_ == WeightMode::AnalyticVC && kind_ == FamilyKind::Thresholds)
    v = 1;
  else if (weight_mode_ == WeightMode::AnalyticVC && kind_ == FamilyKind::Intervals)
    v = 2;
  else
    v = ceil_log2(std::max(std::max(b2_count(d, a), b2_count(d, b)), 2));
  return clamp_weight(v, d);
}

bool PolicyFamily::pair_weight_by_distance() const {
  if (kind_ == FamilyKind::Thresholds) return true;  // counts are 1 or 2 either way
  if (kind_ == FamilyKind::Intervals && weight_mode_ == WeightMode::AnalyticVC) return true;
  return false;
}

std::vector<double> PolicyFamily::weighted_sums(std::span<const double> w) const {
  if (static_cast<int>(w.size()) != n_) throw std::invalid_argument("weighted_sums: size mismatch");
  std::vector<double> out(size(), 0.0);
  if (kind_ == FamilyKind::Thresholds) {
    double run = 0.0;
    for (int k = 0; k < n_; ++k) {
      run += w[k];
      out[k] = run;
    }
    return out;
  }
  if (kind_ == FamilyKind::Intervals) {
    std::vector<double> prefix(n_ + 1, 0.0);
    for (int i = 0; i < n_; ++i) prefix[i + 1] = prefix[i] + w[i];
    for (int id = 0; id < size(); ++id) {
      auto [a, b] = bounds_[id];
      out[id] = prefix[b + 1] - prefix[a];
    }
    return out;
  }
  for (int id = 0; id < size(); ++id) {
    const ItemSet& s = policies_[id];
    double acc = 0.0;
    for (auto i = s.find_first(); i != ItemSet::npos; i = s.find_next(i)) acc += w[i];
    out[id] = acc;
  }
  return out;
}

ItemSet PolicyFamily::union_of(std::span<const int> ids) const {
  ItemSet u(n_);
  for (int id : ids) u |= policy(id);
  return u;
}

ItemSet symdiff_region(const PolicyFamily& fam, std::span<const int> active) {
  if (active.empty()) throw std::invalid_argument("symdiff_region: empty active collection");
  ItemSet uni = fam.policy(active[0]);
  ItemSet inter = uni;
  for (std::size_t i = 1; i < active.size(); ++i) {
    const ItemSet& p = fam.policy(active[i]);
    uni |= p;
    inter &= p;
  }
  uni -= inter;
  return uni;
}

ItemSet uncontrolled_union(const PolicyFamily& fam, std::span<const int> active,
                           std::span<const int> controlled) {
  std::vector<char> is_active(fam.size(), 0);
  for (int id : active) {
    if (id < 0 || id >= fam.size()) throw std::out_of_range("uncontrolled_union: bad policy id");
    is_active[id] = 1;
  }
  for (int id : controlled) {
    if (id < 0 || id >= fam.size() || !is_active[id])
      throw std::invalid_argument("uncontrolled_union: controlled not within active");
  }
  std::vector<char> is_ctl(fam.size(), 0);
  for (int id : controlled) is_ctl[id] = 1;
  ItemSet u(fam.n());
  for (int id : active)
    if (!is_ctl[id]) u |= fam.policy(id);
  return u;
}

namespace {

std::string kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::Thresholds: return "thresholds";
    case FamilyKind::Intervals: return "intervals";
    case FamilyKind::Explicit: return "explicit";
  }
  return "explicit";
}

std::string weight_name(WeightMode w) {
  return w == WeightMode::AnalyticVC ? "analytic_vc" : "sauer_count";
}

}  // namespace

PolicyFamily PolicyFamily::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const int n = j.at("n").get<int>();
  WeightMode wm = kind == "explicit" ? WeightMode::SauerCount : WeightMode::AnalyticVC;
  if (j.contains("weight_mode")) {
    const std::string w = j.at("weight_mode").get<std::string>();
    if (w == "analytic_vc")
      wm = WeightMode::AnalyticVC;
    else if (w == "sauer_count")
      wm = WeightMode::SauerCount;
    else
      throw std::invalid_argument("family json: unknown weight_mode " + w);
  }
  if (kind == "thresholds") return thresholds(n, wm);
  if (kind == "intervals") return intervals(n, wm);
  if (kind == "explicit") {
    auto sets = j.at("policies").get<std::vector<std::vector<int>>>();
    return explicit_sets(n, sets, wm);
  }
  throw std::invalid_argument("family json: unknown kind " + kind);
}

nlohmann::json PolicyFamily::to_json() const {
  nlohmann::json j;
  j["kind"] = kind_name(kind_);
  j["n"] = n_;
  j["weight_mode"] = weight_name(weight_mode_);
  if (kind_ == FamilyKind::Explicit) {
    std::vector<std::vector<int>> sets;
    sets.reserve(size());
    for (const auto& p : policies_) {
      std::vector<int> lst;
      for (auto i = p.find_first(); i != ItemSet::npos; i = p.find_next(i))
        lst.push_back(static_cast<int>(i) + 1);
      sets.push_back(std::move(lst));
    }
    j["policies"] = sets;
  }
  return j;
}

}  // namespace acs
