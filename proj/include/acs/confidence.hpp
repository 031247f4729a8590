#pragma once

#include "acs/core.hpp"

namespace acs {

enum class BoundKind { GeneralVC, ThresholdSpecial };

struct BoundConfig {
  NoiseMode mode = NoiseMode::Stochastic;
  BoundKind kind = BoundKind::GeneralVC;
  int n = 0;
};

struct RhoKappa {
  double rho;
  double kappa;
};

// Variance/range correction factors for sampling without replacement.
// Stochastic mode returns rho = kappa = 1.
RhoKappa rho_kappa(long t, int n, NoiseMode mode);

// Deviation radius for a single policy's sum-scale statistic.
// v is the complexity weight, pol_size = |pi|.
double conf_single(int pol_size, double v, long t, double delta, const BoundConfig& cfg);

// Deviation radius for a pairwise difference at symmetric-difference
// distance d with complexity weight v. Returns 0 when d == 0.
double conf_pair(int d, double v, long t, double delta, const BoundConfig& cfg);

// Sharper pairwise bound for threshold families, on the averaged scale.
// s and t_prime are 1-based threshold positions; T is the draw count.
double conf_threshold_pair(int s, int t_prime, int n, long T, double delta);

// Family-aware wrappers. The pair wrapper dispatches on cfg.kind:
// ThresholdSpecial multiplies conf_threshold_pair by n to reach sum scale
// and requires a Thresholds family.
double conf_single_for(const PolicyFamily& fam, int id, long t, double delta,
                       const BoundConfig& cfg);
double conf_pair_for(const PolicyFamily& fam, int a, int b, long t, double delta,
                     const BoundConfig& cfg);

}  // namespace acs
