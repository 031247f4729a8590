#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "acs/core.hpp"
#include "acs/rng.hpp"

using namespace acs;

namespace {

std::vector<int> one_based(const ItemSet& s) {
  std::vector<int> out;
  for (int i : items_of(s)) out.push_back(i + 1);
  return out;
}

PolicyFamily random_explicit(int n, int m, std::uint64_t seed) {
  Rng rng(seed);
  std::set<ItemSet> seen;
  std::vector<ItemSet> sets;
  while (static_cast<int>(sets.size()) < m) {
    ItemSet s(n);
    for (int i = 0; i < n; ++i)
      if (rng.bernoulli(0.4)) s.set(i);
    if (s.none()) s.set(rng.uniform_below(n));
    if (seen.insert(s).second) sets.push_back(s);
  }
  return PolicyFamily::explicit_bitsets(n, sets);
}

}  // namespace

TEST_CASE("item set helpers round trip") {
  std::vector<int> items{0, 3, 7};
  ItemSet s = make_item_set(9, items);
  CHECK(s.size() == 9);
  CHECK(s.count() == 3);
  CHECK(items_of(s) == items);
}

TEST_CASE("threshold family enumerates prefixes") {
  auto fam = PolicyFamily::thresholds(4);
  CHECK(fam.size() == 4);
  CHECK(fam.n() == 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(fam.policy_size(k) == k + 1);
    std::vector<int> want(k + 1);
    for (int i = 0; i <= k; ++i) want[i] = i + 1;
    CHECK(one_based(fam.policy(k)) == want);
  }
}

TEST_CASE("interval family has n(n+1)/2 members in canonical order") {
  auto fam = PolicyFamily::intervals(3);
  REQUIRE(fam.size() == 6);
  std::vector<std::vector<int>> want{{1}, {2}, {3}, {1, 2}, {2, 3}, {1, 2, 3}};
  for (int id = 0; id < 6; ++id) CHECK(one_based(fam.policy(id)) == want[id]);
}

TEST_CASE("interval count matches brute enumeration for several n") {
  for (int n : {1, 2, 5, 9}) {
    auto fam = PolicyFamily::intervals(n);
    int count = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) ++count;
    CHECK(fam.size() == count);
  }
}

TEST_CASE("explicit family validates input") {
  CHECK_THROWS(PolicyFamily::explicit_sets(3, std::vector<std::vector<int>>{}));
  CHECK_THROWS(PolicyFamily::explicit_sets(3, {{1}, {}}));
  CHECK_THROWS(PolicyFamily::explicit_sets(3, {{1}, {1}}));
  CHECK_THROWS(PolicyFamily::explicit_sets(3, {{1, 4}}));
  auto fam = PolicyFamily::explicit_sets(3, {{2, 1}, {3}});
  CHECK(fam.size() == 2);
  CHECK(one_based(fam.policy(0)) == std::vector<int>{1, 2});
}

TEST_CASE("symmetric difference region: all thresholds minus common prefix") {
  auto fam = PolicyFamily::thresholds(4);
  std::vector<int> all{0, 1, 2, 3};
  ItemSet region = symdiff_region(fam, all);
  CHECK(one_based(region) == std::vector<int>{2, 3, 4});
  std::vector<int> single{2};
  CHECK(symdiff_region(fam, single).none());
  CHECK_THROWS(symdiff_region(fam, std::vector<int>{}));
}

TEST_CASE("uncontrolled union covers only uncertified policies") {
  auto fam = PolicyFamily::thresholds(3);
  std::vector<int> active{0, 1, 2};
  std::vector<int> controlled{0};
  ItemSet s = uncontrolled_union(fam, active, controlled);
  CHECK(one_based(s) == std::vector<int>{1, 2, 3});
  std::vector<int> all_controlled{0, 1, 2};
  CHECK(uncontrolled_union(fam, active, all_controlled).none());
  std::vector<int> not_active{1};
  std::vector<int> act{0, 2};
  CHECK_THROWS(uncontrolled_union(fam, act, not_active));
}

TEST_CASE("single-policy complexity weights") {
  auto thr = PolicyFamily::thresholds(10);
  CHECK(thr.complexity_single(4) == 1.0);  // B1 of [5] is a singleton
  std::vector<std::vector<int>> sets;
  for (int a = 1; a <= 8; ++a) sets.push_back({a, a + 1, a + 2});
  auto expl = PolicyFamily::explicit_sets(10, sets, WeightMode::SauerCount);
  CHECK(expl.complexity_single(0) == 3.0);  // ceil(log2 8) capped at |pi| = 3
}

TEST_CASE("pairwise complexity weights") {
  auto thr = PolicyFamily::thresholds(10);
  CHECK(thr.complexity_pair(1, 4) == 1.0);
  CHECK(thr.complexity_pair(4, 1) == 1.0);
  CHECK_THROWS(thr.complexity_pair(2, 2));
  auto two = PolicyFamily::explicit_sets(5, {{1, 2}, {4}}, WeightMode::SauerCount);
  CHECK(two.complexity_pair(0, 1) == 1.0);
}

TEST_CASE("symdiff sizes agree with brute xor popcount") {
  auto thr = PolicyFamily::thresholds(12);
  auto ivl = PolicyFamily::intervals(9);
  auto expl = random_explicit(10, 14, 77);
  for (const PolicyFamily* fam : {&thr, &ivl, &expl}) {
    for (int a = 0; a < fam->size(); ++a)
      for (int b = 0; b < fam->size(); ++b) {
        ItemSet x = fam->policy(a) ^ fam->policy(b);
        CHECK(fam->symdiff_size(a, b) == static_cast<int>(x.count()));
      }
  }
}

TEST_CASE("strict subset test agrees with bitset containment") {
  auto thr = PolicyFamily::thresholds(8);
  auto ivl = PolicyFamily::intervals(7);
  auto expl = random_explicit(9, 12, 91);
  for (const PolicyFamily* fam : {&thr, &ivl, &expl}) {
    for (int a = 0; a < fam->size(); ++a)
      for (int b = 0; b < fam->size(); ++b) {
        bool want = a != b && fam->policy(a).is_proper_subset_of(fam->policy(b));
        CHECK(fam->is_strict_subset(a, b) == want);
      }
  }
}

TEST_CASE("weighted sums match per-policy accumulation") {
  Rng rng(5);
  auto thr = PolicyFamily::thresholds(11);
  auto ivl = PolicyFamily::intervals(8);
  auto expl = random_explicit(10, 9, 13);
  for (const PolicyFamily* fam : {&thr, &ivl, &expl}) {
    std::vector<double> w(fam->n());
    for (double& v : w) v = 2.0 * rng.uniform01() - 1.0;
    auto sums = fam->weighted_sums(w);
    for (int id = 0; id < fam->size(); ++id) {
      double want = 0.0;
      for (int i : items_of(fam->policy(id))) want += w[i];
      CHECK(sums[id] == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("distance-only pair weights flagged for prefix and interval families") {
  CHECK(PolicyFamily::thresholds(6).pair_weight_by_distance());
  CHECK(PolicyFamily::intervals(6).pair_weight_by_distance());
  CHECK_FALSE(random_explicit(6, 5, 3).pair_weight_by_distance());
}

TEST_CASE("family json round trip") {
  auto thr = PolicyFamily::thresholds(5);
  auto back = PolicyFamily::from_json(thr.to_json());
  CHECK(back.kind() == FamilyKind::Thresholds);
  CHECK(back.n() == 5);
  CHECK(back.size() == 5);

  auto expl = PolicyFamily::explicit_sets(4, {{1, 3}, {2}}, WeightMode::SauerCount);
  auto back2 = PolicyFamily::from_json(expl.to_json());
  REQUIRE(back2.size() == 2);
  for (int id = 0; id < 2; ++id) CHECK(back2.policy(id) == expl.policy(id));
  CHECK_THROWS(PolicyFamily::from_json(nlohmann::json{{"kind", "mystery"}, {"n", 3}}));
}

TEST_CASE("instance validation") {
  CHECK_THROWS(Instance::stochastic({0.5, 1.2}));
  CHECK_THROWS(Instance::stochastic({}));

  Instance st = Instance::stochastic({0.2, 0.8});
  CHECK(st.noise_mode == NoiseMode::Stochastic);
  CHECK_FALSE(st.realized_labels.has_value());

  Instance pe = Instance::persistent({0.2, 0.8, 0.5}, 42);
  REQUIRE(pe.realized_labels.has_value());
  CHECK(static_cast<int>(pe.realized_labels->size()) == 3);
  for (int y : *pe.realized_labels) CHECK((y == 0 || y == 1));

  Instance det = Instance::persistent({1.0, 0.0, 1.0}, 9);
  CHECK(*det.realized_labels == std::vector<int>{1, 0, 1});

  Instance lab = Instance::persistent_labels({1, 0, 0, 1});
  CHECK(lab.eta == std::vector<double>{1.0, 0.0, 0.0, 1.0});
}

TEST_CASE("persistent realization is seed deterministic") {
  Instance a = Instance::persistent({0.3, 0.6, 0.9, 0.1}, 1234);
  Instance b = Instance::persistent({0.3, 0.6, 0.9, 0.1}, 1234);
  Instance c = Instance::persistent({0.3, 0.6, 0.9, 0.1}, 1235);
  CHECK(*a.realized_labels == *b.realized_labels);
  bool all_same = true;
  for (int s = 0; s < 50 && all_same; ++s) {
    Instance d = Instance::persistent({0.3, 0.6, 0.9, 0.1}, 2000 + s);
    all_same = *d.realized_labels == *c.realized_labels;
  }
  CHECK_FALSE(all_same);
}

TEST_CASE("b2 count matches scan on threshold families") {
  auto thr = PolicyFamily::thresholds(9);
  for (int anchor = 0; anchor < 9; ++anchor)
    for (int d = 1; d < 9; ++d) {
      int want = 0;
      for (int other = 0; other < 9; ++other)
        if (other != anchor && thr.symdiff_size(anchor, other) == d) ++want;
      CHECK(thr.b2_count(d, anchor) == want);
    }
}

TEST_CASE("union over ids") {
  auto fam = PolicyFamily::explicit_sets(5, {{1}, {2, 3}, {5}});
  std::vector<int> ids{0, 2};
  CHECK(one_based(fam.union_of(ids)) == std::vector<int>{1, 5});
}
