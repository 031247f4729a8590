#include "acs/fdrctl.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace acs {

namespace {

EpochRecord snapshot(const FdrState& st) {
  EpochRecord rec;
  rec.k = st.epoch - 1;
  rec.t = st.t;
  rec.active = st.active;
  rec.symdiff_region = items_of(st.t_region);
  rec.controlled = st.controlled;
  rec.superset_record = st.record;
  rec.union_region = items_of(st.s_region);
  rec.labels = st.labels;
  return rec;
}

void refresh_regions(FdrState& st, const PolicyFamily& fam) {
  if (st.active.empty()) {
    st.s_region = ItemSet(fam.n());
    st.t_region = ItemSet(fam.n());
    return;
  }
  st.t_region = symdiff_region(fam, st.active);
  st.s_region = uncontrolled_union(fam, st.active, st.controlled);
}

}  // namespace

FdrState make_fdr_state(const PolicyFamily& fam) {
  if (fam.size() < 1) throw std::invalid_argument("make_fdr_state: empty family");
  FdrState st;
  st.active.resize(fam.size());
  std::iota(st.active.begin(), st.active.end(), 0);
  st.i_sums.assign(fam.n(), 0.0);
  st.j_sums.assign(fam.n(), 0.0);
  refresh_regions(st, fam);
  return st;
}

void fdr_epoch_update(FdrState& state, const PolicyFamily& fam, const BoundConfig& cfg,
                      double alpha, double delta) {
  const int k = state.epoch;
  const double delta_k = 0.25 * delta / (static_cast<double>(k) * k);
  const double scale = static_cast<double>(fam.n()) / static_cast<double>(state.t);
  const auto wi = fam.weighted_sums(state.i_sums);
  const auto wj = fam.weighted_sums(state.j_sums);

  std::vector<char> in_controlled(fam.size(), 0);
  for (int id : state.controlled) in_controlled[id] = 1;

  // (a) Certification. Live estimates and radii are kept for the later
  // condition-1 checks on policies that stay uncertified.
  std::vector<double> live_fdr(fam.size(), 0.0), live_rad(fam.size(), 0.0);
  for (int id : state.active) {
    live_fdr[id] = 1.0 - scale * wi[id] / fam.policy_size(id);
    live_rad[id] =
        conf_single_for(fam, id, state.t, delta_k, cfg) / fam.policy_size(id);
    if (!in_controlled[id] && live_fdr[id] + live_rad[id] <= alpha) {
      in_controlled[id] = 1;
      state.controlled.push_back(id);
      state.frozen[id] = {live_fdr[id], live_rad[id]};
    }
  }
  std::sort(state.controlled.begin(), state.controlled.end());

  // (b) Conditions 1 and 2 against the post-certification controlled set.
  const bool by_dist = fam.pair_weight_by_distance();
  std::vector<double> lut;
  if (by_dist) lut.assign(fam.n() + 1, -1.0);
  auto pair_radius = [&](int a, int b) {
    if (!by_dist) return conf_pair_for(fam, a, b, state.t, delta_k, cfg);
    int d = fam.symdiff_size(a, b);
    if (lut[d] < 0.0) lut[d] = conf_pair_for(fam, a, b, state.t, delta_k, cfg);
    return lut[d];
  };

  std::vector<int> keep, new_record;
  keep.reserve(state.active.size());
  for (int id : state.active) {
    double f = live_fdr[id], r = live_rad[id];
    if (auto it = state.frozen.find(id); it != state.frozen.end()) {
      f = it->second.fdr_hat;
      r = it->second.radius;
    }
    if (f - r > alpha) continue;  // condition 1: drop without recording
    bool dominated = false;
    for (int other : state.controlled) {
      if (other == id) continue;
      if (scale * (wj[other] - wj[id]) > pair_radius(id, other)) {
        dominated = true;
        break;
      }
    }
    if (dominated) {
      new_record.push_back(id);  // condition 2
      continue;
    }
    keep.push_back(id);
  }
  state.active = std::move(keep);
  for (int id : new_record) state.record.push_back(id);
  {
    std::vector<int> c2;
    for (int id : state.controlled)
      if (std::binary_search(state.active.begin(), state.active.end(), id))
        c2.push_back(id);
    state.controlled = std::move(c2);
  }

  // (c) Condition 3: strict subsets of anything certified or recorded.
  std::vector<int> dominators = state.controlled;
  dominators.insert(dominators.end(), state.record.begin(), state.record.end());
  std::vector<int> keep3;
  keep3.reserve(state.active.size());
  for (int id : state.active) {
    bool sub = false;
    for (int other : dominators) {
      if (other == id) continue;
      if (fam.is_strict_subset(id, other)) {
        sub = true;
        break;
      }
    }
    if (!sub) keep3.push_back(id);
  }
  state.active = std::move(keep3);
  {
    std::vector<int> c3;
    for (int id : state.controlled)
      if (std::binary_search(state.active.begin(), state.active.end(), id))
        c3.push_back(id);
    state.controlled = std::move(c3);
  }

  refresh_regions(state, fam);
  state.epoch = k + 1;
}

TrialResult run_fdr(const Instance& inst, const PolicyFamily& fam, double alpha,
                    double delta, const FdrOptions& opts) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("run_fdr: alpha must be in (0,1)");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("run_fdr: delta must be in (0,1)");
  if (fam.size() < 1) throw std::invalid_argument("run_fdr: empty family");
  if (inst.n != fam.n()) throw std::invalid_argument("run_fdr: n mismatch");

  const int n = fam.n();
  const NoiseMode mode = inst.noise_mode;
  BoundConfig cfg{mode, opts.bound_kind, n};
  StreamMode sm = mode == NoiseMode::Persistent ? StreamMode::WithoutReplacement
                                                : StreamMode::WithReplacement;
  IndexStream i_stream(sm, n, mix_seed(opts.seed, 1));
  IndexStream j_stream(sm, n, mix_seed(opts.seed, 2));
  LabelOracle oracle(inst, mix_seed(opts.seed, 3));

  FdrState st = make_fdr_state(fam);
  TrialResult res;
  res.seed = opts.seed;

  for (;;) {
    if (static_cast<int>(st.active.size()) <= 1) break;
    if (mode == NoiseMode::Persistent && st.t >= n) break;
    if (st.t >= opts.step_cap) {
      res.flags |= kFlagCapHit;
      break;
    }
    int ii = i_stream.next();
    int jj = j_stream.next();
    ++st.t;
    if (opts.passive || st.s_region.test(ii)) {
      int y = oracle.observe(ii);
      st.i_sums[ii] += y;
      ++st.labels;
      if (opts.on_observe) opts.on_observe(st, ii, true, y);
    }
    if (opts.passive || st.t_region.test(jj)) {
      int y = oracle.observe(jj);
      st.j_sums[jj] += y;
      ++st.labels;
      if (opts.on_observe) opts.on_observe(st, jj, false, y);
    }
    if (st.t == (1L << st.epoch)) {
      fdr_epoch_update(st, fam, cfg, alpha, delta);
      EpochRecord rec = snapshot(st);
      if (opts.record_trace) res.trace.push_back(rec);
      if (opts.on_epoch) opts.on_epoch(st, rec);
    }
  }

  res.labels_used = st.labels;
  res.epochs = st.epoch - 1;
  res.steps = st.t;
  const auto wj = fam.weighted_sums(st.j_sums);
  const double scale = st.t > 0 ? static_cast<double>(n) / static_cast<double>(st.t) : 0.0;
  if (!st.controlled.empty()) {
    int best = st.controlled.front();
    for (int id : st.controlled)
      if (wj[id] > wj[best]) best = id;
    res.winner = best;
    res.tp_hat = scale * wj[best];
    res.frozen_fdr_hat = st.frozen.at(best).fdr_hat;
  } else if (st.active.size() == 1) {
    res.winner = st.active.front();
    res.flags |= kFlagUncertifiedSurvivor;
    res.tp_hat = scale * wj[st.active.front()];
  } else {
    res.flags |= kFlagInfeasible;
  }
  return res;
}

}  // namespace acs
