#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace acs {

// Items are 1-based in all user-facing formats; internally sets are 0-based
// bitsets of width n.
using ItemSet = boost::dynamic_bitset<>;

ItemSet make_item_set(int n, std::span<const int> zero_based);
std::vector<int> items_of(const ItemSet& s);  // ascending, 0-based

enum class NoiseMode { Stochastic, Persistent };

// A labeled pool. eta[i] is the probability the label of item i is 1.
// Stochastic: each observation resamples the label. Persistent: labels are
// fixed; realized_labels holds the one realization the oracle serves.
struct Instance {
  int n = 0;
  std::vector<double> eta;
  NoiseMode noise_mode = NoiseMode::Stochastic;
  std::optional<std::vector<int>> realized_labels;

  static Instance stochastic(std::vector<double> eta);
  // Realizes Bernoulli(eta[i]) once with the given seed; deterministic etas
  // (eta in {0,1}) realize to themselves.
  static Instance persistent(std::vector<double> eta, std::uint64_t realize_seed);
  static Instance persistent_labels(std::vector<int> labels);

  void validate() const;  // throws std::invalid_argument on violations
};

enum class FamilyKind { Thresholds, Intervals, Explicit };
enum class WeightMode { AnalyticVC, SauerCount };

// A finite, deduplicated collection of candidate item sets with a canonical
// id order, plus the complexity weights the confidence bounds consume.
// Immutable after construction; safe to share read-only across trials.
class PolicyFamily {
 public:
  // Prefixes [1], [2], ..., [n]; id k is the prefix of length k+1.
  static PolicyFamily thresholds(int n, WeightMode wm = WeightMode::AnalyticVC);
  // All contiguous runs, enumerated length-major then by start.
  static PolicyFamily intervals(int n, WeightMode wm = WeightMode::AnalyticVC);
  // Arbitrary nonempty sets given as sorted 1-based item lists, in the given
  // order. Duplicates are rejected.
  static PolicyFamily explicit_sets(int n, const std::vector<std::vector<int>>& one_based,
                                    WeightMode wm = WeightMode::SauerCount);
  static PolicyFamily explicit_bitsets(int n, std::vector<ItemSet> sets,
                                       WeightMode wm = WeightMode::SauerCount);

  int n() const { return n_; }
  int size() const { return static_cast<int>(policies_.size()); }
  FamilyKind kind() const { return kind_; }
  WeightMode weight_mode() const { return weight_mode_; }
  const ItemSet& policy(int id) const;
  int policy_size(int id) const;
  const std::vector<ItemSet>& policies() const { return policies_; }

  int symdiff_size(int a, int b) const;
  bool is_strict_subset(int a, int b) const;  // policy(a) strictly inside policy(b)

  // Count of family members with the given size / at the given symmetric
  // difference distance from an anchor member.
  int b1_count(int size) const;
  int b2_count(int dist, int anchor) const;

  // Complexity weight of the equal-size bucket around policy(id), capped at
  // |policy| and floored at 1.
  double complexity_single(int id) const;
  // Complexity weight of the pair bucket, capped at the symmetric difference
  // size; a == b is a caller error (confidence radii special-case it to 0).
  double complexity_pair(int a, int b) const;

  // True when complexity_pair depends on (a, b) only through symdiff_size;
  // engines then cache radii per distance.
  bool pair_weight_by_distance() const;

  // Sum of w over each policy's items, in id order.
  std::vector<double> weighted_sums(std::span<const double> w) const;

  ItemSet union_of(std::span<const int> ids) const;

  static PolicyFamily from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  PolicyFamily() = default;
  void finalize();  // size histogram, interval bounds, distance cache
  int sauer_single(int id) const;

  FamilyKind kind_ = FamilyKind::Explicit;
  WeightMode weight_mode_ = WeightMode::SauerCount;
  int n_ = 0;
  std::vector<ItemSet> policies_;
  std::vector<int> sizes_;
  std::vector<int> size_count_;
  std::vector<std::pair<int, int>> bounds_;     // intervals: 0-based inclusive [a,b]
  std::vector<std::vector<std::uint16_t>> dist_;  // explicit, |Pi| small: pairwise distances
};

// Items on which the active policies disagree: union minus intersection.
// Errors on an empty id collection.
ItemSet symdiff_region(const PolicyFamily& fam, std::span<const int> active);

// Union of the active-but-uncertified policies. controlled must be a subset
// of active (both as id collections).
ItemSet uncontrolled_union(const PolicyFamily& fam, std::span<const int> active,
                           std::span<const int> controlled);

}  // namespace acs
