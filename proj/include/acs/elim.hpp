#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "acs/confidence.hpp"
#include "acs/core.hpp"
#include "acs/result.hpp"
#include "acs/sampling.hpp"

namespace acs {

// Doubling-epoch action elimination. Rewards live in [-1,1]; labels are fed
// in as 2Y-1. Draws are rejected outside the current symmetric-difference
// region unless the passive flag disables the observation gate.
struct ElimState {
  std::vector<int> active;
  ItemSet region;
  int epoch = 1;
  long t = 0;
  std::vector<double> item_sums;  // G_i: accumulated observed rewards
  long labels = 0;
};

ElimState make_elim_state(const PolicyFamily& fam);

struct ElimOptions {
  BoundKind bound_kind = BoundKind::GeneralVC;
  std::uint64_t seed = 0;
  long step_cap = 1L << 26;
  bool passive = false;
  bool record_trace = false;
  std::function<void(const ElimState&, const EpochRecord&)> on_epoch;
  std::function<void(const ElimState&, int, double)> on_observe;
};

// Applies the t = 2^epoch boundary: batch elimination against the snapshot
// active set, region refresh, epoch advance. Exposed for direct testing.
void elim_epoch_update(ElimState& state, const PolicyFamily& fam, const BoundConfig& cfg,
                       double delta);

// Generic engine over an arbitrary bounded-reward source.
TrialResult run_elimination(const PolicyFamily& fam, NoiseMode mode, RewardSource& source,
                            double delta, const ElimOptions& opts);

// Classification front end: labels from the instance, rewards 2Y-1.
TrialResult run_classify(const Instance& inst, const PolicyFamily& fam, double delta,
                         const ElimOptions& opts);

}  // namespace acs
