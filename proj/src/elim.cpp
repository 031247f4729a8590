#include "acs/elim.hpp"

#include <numeric>
#include <stdexcept>

namespace acs {

namespace {

// Winner rule: estimated mean at least that of every other active policy.
// With a single shared t the estimate ordering equals the G-sum ordering.
int pick_winner(const std::vector<int>& active, const std::vector<double>& sums) {
  int best = active.front();
  for (int id : active)
    if (sums[id] > sums[best]) best = id;
  return best;
}

std::vector<double> active_policy_sums(const PolicyFamily& fam,
                                       const std::vector<double>& item_sums) {
  return fam.weighted_sums(item_sums);
}

EpochRecord snapshot(const ElimState& st) {
  EpochRecord rec;
  rec.k = st.epoch - 1;
  rec.t = st.t;
  rec.active = st.active;
  rec.symdiff_region = items_of(st.region);
  rec.labels = st.labels;
  return rec;
}

}  // namespace

ElimState make_elim_state(const PolicyFamily& fam) {
  if (fam.size() < 1) throw std::invalid_argument("make_elim_state: empty family");
  ElimState st;
  st.active.resize(fam.size());
  std::iota(st.active.begin(), st.active.end(), 0);
  st.region = symdiff_region(fam, st.active);
  st.item_sums.assign(fam.n(), 0.0);
  return st;
}

void elim_epoch_update(ElimState& state, const PolicyFamily& fam, const BoundConfig& cfg,
                       double delta) {
  const int k = state.epoch;
  const double delta_k = 0.5 * delta / (static_cast<double>(k) * k);
  const double scale = static_cast<double>(fam.n()) / static_cast<double>(state.t);
  const auto sums = active_policy_sums(fam, state.item_sums);
  const auto& active = state.active;
  const int m = static_cast<int>(active.size());

  // Radii depend only on the symmetric-difference size for threshold and
  // interval families, so memoize per distance.
  const bool by_dist = fam.pair_weight_by_distance();
  std::vector<double> lut;
  if (by_dist) lut.assign(fam.n() + 1, -1.0);

  std::vector<char> out(m, 0);
  for (int ai = 0; ai < m; ++ai) {
    for (int bi = ai + 1; bi < m; ++bi) {
      const int a = active[ai], b = active[bi];
      double radius;
      if (by_dist) {
        int d = fam.symdiff_size(a, b);
        if (lut[d] < 0.0) lut[d] = conf_pair_for(fam, a, b, state.t, delta_k, cfg);
        radius = lut[d];
      } else {
        radius = conf_pair_for(fam, a, b, state.t, delta_k, cfg);
      }
      const double diff = scale * (sums[a] - sums[b]);
      if (diff > radius) out[bi] = 1;
      if (-diff > radius) out[ai] = 1;
    }
  }

  std::vector<int> survivors;
  survivors.reserve(m);
  for (int i = 0; i < m; ++i)
    if (!out[i]) survivors.push_back(active[i]);
  state.active = std::move(survivors);
  state.region = symdiff_region(fam, state.active);
  state.epoch = k + 1;
}

TrialResult run_elimination(const PolicyFamily& fam, NoiseMode mode, RewardSource& source,
                            double delta, const ElimOptions& opts) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("run_elimination: delta must be in (0,1)");
  if (fam.size() < 1) throw std::invalid_argument("run_elimination: empty family");
  if (source.n() != fam.n()) throw std::invalid_argument("run_elimination: n mismatch");

  const int n = fam.n();
  BoundConfig cfg{mode, opts.bound_kind, n};
  StreamMode sm = mode == NoiseMode::Persistent ? StreamMode::WithoutReplacement
                                                : StreamMode::WithReplacement;
  IndexStream stream(sm, n, mix_seed(opts.seed, 1));

  ElimState st = make_elim_state(fam);
  TrialResult res;
  res.seed = opts.seed;

  for (;;) {
    if (st.region.none()) break;
    if (mode == NoiseMode::Persistent && st.t >= n) break;
    if (st.t >= opts.step_cap) {
      res.flags |= kFlagCapHit;
      break;
    }
    int idx = stream.next();
    ++st.t;
    if (opts.passive || st.region.test(idx)) {
      double r = source.observe(idx);
      st.item_sums[idx] += r;
      ++st.labels;
      if (opts.on_observe) opts.on_observe(st, idx, r);
    }
    if (st.t == (1L << st.epoch)) {
      elim_epoch_update(st, fam, cfg, delta);
      EpochRecord rec = snapshot(st);
      if (opts.record_trace) res.trace.push_back(rec);
      if (opts.on_epoch) opts.on_epoch(st, rec);
    }
  }

  const auto sums = active_policy_sums(fam, st.item_sums);
  res.winner = pick_winner(st.active, sums);
  res.labels_used = st.labels;
  res.epochs = st.epoch - 1;
  res.steps = st.t;
  return res;
}

TrialResult run_classify(const Instance& inst, const PolicyFamily& fam, double delta,
                         const ElimOptions& opts) {
  if (inst.n != fam.n()) throw std::invalid_argument("run_classify: n mismatch");
  LabelRewardSource source(inst, mix_seed(opts.seed, 2));
  return run_elimination(fam, inst.noise_mode, source, delta, opts);
}

}  // namespace acs
