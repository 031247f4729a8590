#pragma once

#include <optional>
#include <vector>

#include "acs/core.hpp"

namespace acs {

// Population quantities of a labeled pool. All take the item-set view of a
// policy; fdr/tp/tpr require a nonempty set.
double risk(const ItemSet& pi, const Instance& inst);
double fdr(const ItemSet& pi, const Instance& inst);
double tp(const ItemSet& pi, const Instance& inst);
double tpr(const ItemSet& pi, const Instance& inst);     // errors when total mass is 0
double mu_sum(const ItemSet& pi, const Instance& inst);  // sum of 2*eta_i - 1 over pi

// Highest-mean policy; ties broken toward the lowest id.
int best_policy(const PolicyFamily& fam, const Instance& inst);

// Among policies with FDR <= alpha, the one maximizing TP (ties toward the
// lowest id). Empty when no policy qualifies.
std::optional<int> best_fdr_policy(const PolicyFamily& fam, const Instance& inst,
                                   double alpha);

// Per-policy gap quantities. The two-argument overload anchors delta_tilde at
// the best-mean policy; the alpha overload anchors it at the best feasible
// policy's TP and also fills delta_alpha = |FDR(pi) - alpha|.
struct GapProfile {
  std::vector<double> mu_pi;
  std::vector<double> tp_pi;
  std::vector<double> delta_tilde;   // 0 for the anchor policy itself
  std::vector<double> delta_alpha;   // alpha overload only
  int best_id = -1;
  std::optional<int> best_alpha_id;  // alpha overload only
};

GapProfile gap_profile(const PolicyFamily& fam, const Instance& inst);
GapProfile gap_profile(const PolicyFamily& fam, const Instance& inst, double alpha);

// Ground-truth per-item sample-count predictors. Zero gaps yield infinities;
// the capped totals clamp each per-item rate at one label.
struct PolicyPredictors {
  double tau = 0.0;
  double s_fdr = 0.0;
  double s_tp = 0.0;
  double t_fdr = 0.0;
  double t_tp = 0.0;
};

struct ComplexityPredictors {
  std::vector<PolicyPredictors> per_policy;
  double elim_total = 0.0;
  double elim_total_capped = 0.0;
  double fdr_total = 0.0;
  double fdr_total_capped = 0.0;
};

ComplexityPredictors complexity_predictors(const PolicyFamily& fam, const Instance& inst,
                                           double alpha, double delta);

}  // namespace acs
