#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "acs/core.hpp"

namespace acs {

// Snapshot taken at the end of each doubling epoch.
struct EpochRecord {
  int k = 0;
  long t = 0;
  std::vector<int> active;
  std::vector<int> symdiff_region;            // 0-based items
  std::optional<std::vector<int>> controlled;  // FDR runs only
  std::optional<std::vector<int>> superset_record;
  std::optional<std::vector<int>> union_region;  // 0-based items, FDR runs only
  long labels = 0;
};

enum TrialFlag : unsigned {
  kFlagCapHit = 1u,
  kFlagInfeasible = 2u,
  kFlagUncertifiedSurvivor = 4u,
};

struct TrialResult {
  std::optional<int> winner;  // policy id, empty when infeasible
  long labels_used = 0;
  int epochs = 0;
  long steps = 0;
  unsigned flags = 0;
  std::uint64_t seed = 0;
  std::vector<EpochRecord> trace;
  double tp_hat = 0.0;            // FDR runs: winner's final estimate
  double frozen_fdr_hat = 0.0;    // FDR runs: winner's certification-time estimate
  std::optional<bool> correct;    // vs the brute-force oracle, set by the harness
};

}  // namespace acs
