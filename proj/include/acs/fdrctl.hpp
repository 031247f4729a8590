#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "acs/confidence.hpp"
#include "acs/core.hpp"
#include "acs/result.hpp"
#include "acs/sampling.hpp"

namespace acs {

// FDR estimate and radius frozen at certification time. Once certified a
// policy's items may leave the I-stream region, so later accumulation would
// bias the estimate; condition-1 checks reuse this snapshot instead.
struct FrozenFdr {
  double fdr_hat = 0.0;
  double radius = 0.0;
};

struct FdrState {
  std::vector<int> active;
  std::vector<int> controlled;        // certified subset of active
  std::vector<int> record;            // condition-2 victims, never pruned
  ItemSet s_region;                   // I stream: union over active minus controlled
  ItemSet t_region;                   // J stream: symmetric-difference region of active
  int epoch = 1;
  long t = 0;
  std::vector<double> i_sums;         // per-item label sums from the I stream
  std::vector<double> j_sums;         // per-item label sums from the J stream
  long labels = 0;
  std::map<int, FrozenFdr> frozen;
};

FdrState make_fdr_state(const PolicyFamily& fam);

struct FdrOptions {
  BoundKind bound_kind = BoundKind::GeneralVC;
  std::uint64_t seed = 0;
  long step_cap = 1L << 26;
  bool passive = false;
  bool record_trace = false;
  std::function<void(const FdrState&, const EpochRecord&)> on_epoch;
  // args: state, item, stream flag (true = I stream), label
  std::function<void(const FdrState&, int, bool, int)> on_observe;
};

// Applies the t = 2^epoch boundary: certification, removal conditions 1-3 in
// order, region refresh, epoch advance. Exposed for direct testing.
void fdr_epoch_update(FdrState& state, const PolicyFamily& fam, const BoundConfig& cfg,
                      double alpha, double delta);

TrialResult run_fdr(const Instance& inst, const PolicyFamily& fam, double alpha,
                    double delta, const FdrOptions& opts);

}  // namespace acs
