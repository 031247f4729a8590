#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "acs/elim.hpp"
#include "acs/metrics.hpp"
#include "acs/rng.hpp"

using namespace acs;

namespace {

// Deterministic per-item rewards; exercises the engine away from the
// label-specific front end.
class FixedRewardSource final : public RewardSource {
 public:
  explicit FixedRewardSource(std::vector<double> r) : r_(std::move(r)) {}
  double observe(int item) override {
    ++queries_;
    return r_.at(item);
  }
  long queries() const override { return queries_; }
  int n() const override { return static_cast<int>(r_.size()); }

 private:
  std::vector<double> r_;
  long queries_ = 0;
};

std::vector<double> step_eta(int n, int hi) {
  std::vector<double> eta(n, 0.1);
  for (int i = 0; i < hi; ++i) eta[i] = 0.9;
  return eta;
}

}  // namespace

TEST_CASE("singleton family returns immediately") {
  auto fam = PolicyFamily::explicit_sets(5, {{2, 4}});
  Instance inst = Instance::stochastic(std::vector<double>(5, 0.5));
  ElimOptions opts;
  opts.seed = 9;
  TrialResult res = run_classify(inst, fam, 0.1, opts);
  REQUIRE(res.winner.has_value());
  CHECK(*res.winner == 0);
  CHECK(res.labels_used == 0);
  CHECK(res.steps == 0);
  CHECK(res.epochs == 0);
  CHECK(res.flags == 0u);
}

TEST_CASE("epoch update eliminates against the epoch snapshot") {
  // Six policies over eight items. With t = 2^16 and delta = 0.2 the radii
  // land so that the big set beats {1,2}, {1,2} beats {1}, but the big set
  // does not beat {1} directly. {1} must still fall: comparisons quantify
  // over the active set as it stood when the epoch closed.
  auto fam = PolicyFamily::explicit_sets(
      8, {{1, 2, 3, 4}, {1, 2}, {1}, {2}, {3}, {4}});
  ElimState st = make_elim_state(fam);
  st.t = 65536;
  st.epoch = 16;
  st.item_sums = {0.0, 830.0, 1160.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  BoundConfig cfg{NoiseMode::Stochastic, BoundKind::GeneralVC, 8};

  // Decisive comparisons, written out from the bound definition. The pair
  // weight is 1 except at distance 3 anchored at the big set, where four
  // equidistant behaviors push it to 2.
  const double delta_k = 0.5 * 0.2 / (16.0 * 16.0);
  const double lg = std::log(8.0 / delta_k);
  auto radius = [&](double d, double v) {
    return std::sqrt(8.0 * d * 8.0 * v * lg / 65536.0) +
           4.0 * 8.0 * v * lg / (3.0 * 65536.0);
  };
  const double scale = 8.0 / 65536.0;
  CHECK(scale * (1990.0 - 830.0) > radius(2, 1));   // big set removes {1,2}
  CHECK(scale * (830.0 - 0.0) > radius(1, 1));      // {1,2} removes {1}
  CHECK(scale * (1990.0 - 0.0) < radius(3, 2));     // big set spares {1}

  elim_epoch_update(st, fam, cfg, 0.2);

  CHECK(st.active == std::vector<int>{0, 3, 4, 5});
  CHECK(st.epoch == 17);
  CHECK(items_of(st.region) == std::vector<int>{0, 1, 2, 3});
  CHECK(st.t == 65536);  // update does not consume steps
}

TEST_CASE("stochastic step instance finds the best threshold") {
  const int n = 20;
  auto fam = PolicyFamily::thresholds(n);
  Instance inst = Instance::stochastic(step_eta(n, 10));
  int target = best_policy(fam, inst);
  REQUIRE(target == 9);
  int hits = 0;
  for (int s = 0; s < 10; ++s) {
    ElimOptions opts;
    opts.seed = mix_seed(1234, s);
    TrialResult res = run_classify(inst, fam, 0.1, opts);
    REQUIRE(res.winner.has_value());
    if (*res.winner == target) ++hits;
    CHECK(res.flags == 0u);
    CHECK(res.labels_used <= res.steps);
  }
  CHECK(hits >= 8);
}

TEST_CASE("persistent runs stop at n labels and recover the realized best") {
  Rng rng(555);
  for (int rep = 0; rep < 25; ++rep) {
    const int n = 6 + rng.uniform_below(11);  // 6..16
    const int m = 2 + rng.uniform_below(11);  // 2..12
    std::set<ItemSet> seen;
    std::vector<ItemSet> sets;
    while (static_cast<int>(sets.size()) < m) {
      ItemSet s(n);
      for (int i = 0; i < n; ++i)
        if (rng.bernoulli(0.5)) s.set(i);
      if (s.none()) s.set(rng.uniform_below(n));
      if (seen.insert(s).second) sets.push_back(s);
    }
    auto fam = PolicyFamily::explicit_bitsets(n, sets);
    std::vector<double> eta(n);
    for (double& e : eta) e = rng.bernoulli(0.5) ? 1.0 : 0.0;
    Instance inst = Instance::persistent(eta, rng.next_u64());

    ElimOptions opts;
    opts.seed = rng.next_u64();
    TrialResult res = run_classify(inst, fam, 0.1, opts);
    REQUIRE(res.winner.has_value());
    CHECK(res.labels_used <= n);
    CHECK(res.steps <= n);
    CHECK(*res.winner == best_policy(fam, inst));
  }
}

TEST_CASE("generic reward source with three-point rewards") {
  auto fam = PolicyFamily::explicit_sets(3, {{1}, {2}, {3}});
  FixedRewardSource src({1.0, 0.0, -1.0});
  ElimOptions opts;
  opts.seed = 77;
  TrialResult res = run_elimination(fam, NoiseMode::Stochastic, src, 0.1, opts);
  REQUIRE(res.winner.has_value());
  CHECK(*res.winner == 0);
  CHECK(res.flags == 0u);
  CHECK(src.queries() == res.labels_used);
}

TEST_CASE("hooks see in-region observations and shrinking epochs") {
  const int n = 20;
  auto fam = PolicyFamily::thresholds(n);
  Instance inst = Instance::stochastic(step_eta(n, 10));
  ElimOptions opts;
  opts.seed = 4242;
  opts.record_trace = true;
  bool gate_ok = true;
  opts.on_observe = [&](const ElimState& st, int item, double r) {
    if (!st.region.test(item)) gate_ok = false;
    if (r != 1.0 && r != -1.0) gate_ok = false;
  };
  std::vector<EpochRecord> seen;
  opts.on_epoch = [&](const ElimState& st, const EpochRecord& rec) {
    CHECK(rec.active == st.active);
    CHECK(rec.symdiff_region == items_of(st.region));
    seen.push_back(rec);
  };
  TrialResult res = run_classify(inst, fam, 0.1, opts);
  CHECK(gate_ok);
  REQUIRE(res.winner.has_value());
  REQUIRE(!seen.empty());
  CHECK(res.trace.size() == seen.size());
  for (std::size_t i = 0; i < seen.size(); ++i) {
    CHECK(seen[i].k == static_cast<int>(i) + 1);
    CHECK(seen[i].t == (1L << (i + 1)));
    CHECK(seen[i].labels <= seen[i].t);
    if (i > 0) {
      // Active ids and region items only ever shrink.
      CHECK(std::includes(seen[i - 1].active.begin(), seen[i - 1].active.end(),
                          seen[i].active.begin(), seen[i].active.end()));
      CHECK(std::includes(seen[i - 1].symdiff_region.begin(),
                          seen[i - 1].symdiff_region.end(),
                          seen[i].symdiff_region.begin(),
                          seen[i].symdiff_region.end()));
    }
  }
}

TEST_CASE("passive mode labels every draw") {
  const int n = 12;
  auto fam = PolicyFamily::thresholds(n);
  Instance inst = Instance::stochastic(step_eta(n, 6));
  ElimOptions opts;
  opts.seed = 99;
  opts.passive = true;
  TrialResult res = run_classify(inst, fam, 0.1, opts);
  CHECK(res.labels_used == res.steps);

  ElimOptions active_opts;
  active_opts.seed = 99;
  TrialResult adaptive = run_classify(inst, fam, 0.1, active_opts);
  CHECK(adaptive.labels_used < adaptive.steps);
}

TEST_CASE("step cap flags and still reports an interim winner") {
  auto fam = PolicyFamily::thresholds(10);
  Instance inst = Instance::stochastic(step_eta(10, 5));
  ElimOptions opts;
  opts.seed = 3;
  opts.step_cap = 16;
  TrialResult res = run_classify(inst, fam, 0.1, opts);
  CHECK((res.flags & kFlagCapHit) != 0u);
  CHECK(res.steps == 16);
  CHECK(res.winner.has_value());
}

TEST_CASE("same seed reproduces the trial exactly") {
  auto fam = PolicyFamily::thresholds(16);
  Instance inst = Instance::stochastic(step_eta(16, 8));
  ElimOptions opts;
  opts.seed = 31337;
  TrialResult a = run_classify(inst, fam, 0.1, opts);
  TrialResult b = run_classify(inst, fam, 0.1, opts);
  CHECK(a.winner == b.winner);
  CHECK(a.labels_used == b.labels_used);
  CHECK(a.steps == b.steps);
  CHECK(a.epochs == b.epochs);
}

TEST_CASE("engine argument validation") {
  auto fam = PolicyFamily::thresholds(4);
  Instance inst = Instance::stochastic({0.5, 0.5, 0.5});
  ElimOptions opts;
  CHECK_THROWS(run_classify(inst, fam, 0.1, opts));  // n mismatch
  Instance ok = Instance::stochastic(std::vector<double>(4, 0.5));
  CHECK_THROWS(run_classify(ok, fam, 0.0, opts));
  CHECK_THROWS(run_classify(ok, fam, 1.0, opts));
}
