#include "acs/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace acs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_pi(const ItemSet& pi, const Instance& inst, const char* who) {
  if (static_cast<int>(pi.size()) != inst.n)
    throw std::invalid_argument(std::string(who) + ": item set width mismatch");
}

double eta_sum(const ItemSet& pi, const Instance& inst) {
  double s = 0.0;
  for (auto i = pi.find_first(); i != ItemSet::npos; i = pi.find_next(i))
    s += inst.eta[i];
  return s;
}

// log(n * max(log(1/gap^2), e) / delta)
double floored_log(double gap, int n, double delta) {
  double inner = std::log(1.0 / (gap * gap));
  if (inner < M_E) inner = M_E;
  return std::log(n * inner / delta);
}

double rate(double weight, double denom, double gap, int n, double delta) {
  if (gap <= 0.0) return kInf;
  return (weight / denom) * (1.0 / (gap * gap)) * floored_log(gap, n, delta);
}

}  // namespace

double risk(const ItemSet& pi, const Instance& inst) {
  check_pi(pi, inst, "risk");
  double s = 0.0;
  for (int i = 0; i < inst.n; ++i) s += pi.test(i) ? 1.0 - inst.eta[i] : inst.eta[i];
  return s / inst.n;
}

double fdr(const ItemSet& pi, const Instance& inst) {
  check_pi(pi, inst, "fdr");
  auto sz = pi.count();
  if (sz == 0) throw std::invalid_argument("fdr: empty policy");
  return 1.0 - eta_sum(pi, inst) / static_cast<double>(sz);
}

double tp(const ItemSet& pi, const Instance& inst) {
  check_pi(pi, inst, "tp");
  if (pi.none()) throw std::invalid_argument("tp: empty policy");
  return eta_sum(pi, inst);
}

double tpr(const ItemSet& pi, const Instance& inst) {
  check_pi(pi, inst, "tpr");
  if (pi.none()) throw std::invalid_argument("tpr: empty policy");
  double total = 0.0;
  for (double e : inst.eta) total += e;
  if (total <= 0.0) throw std::invalid_argument("tpr: no positive mass in the pool");
  return eta_sum(pi, inst) / total;
}

double mu_sum(const ItemSet& pi, const Instance& inst) {
  check_pi(pi, inst, "mu_sum");
  double s = 0.0;
  for (auto i = pi.find_first(); i != ItemSet::npos; i = pi.find_next(i))
    s += 2.0 * inst.eta[i] - 1.0;
  return s;
}

int best_policy(const PolicyFamily& fam, const Instance& inst) {
  if (fam.n() != inst.n) throw std::invalid_argument("best_policy: n mismatch");
  std::vector<double> mu(inst.n);
  for (int i = 0; i < inst.n; ++i) mu[i] = 2.0 * inst.eta[i] - 1.0;
  auto sums = fam.weighted_sums(mu);
  int best = 0;
  for (int id = 1; id < fam.size(); ++id)
    if (sums[id] > sums[best]) best = id;
  return best;
}

std::optional<int> best_fdr_policy(const PolicyFamily& fam, const Instance& inst,
                                   double alpha) {
  if (fam.n() != inst.n) throw std::invalid_argument("best_fdr_policy: n mismatch");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("best_fdr_policy: alpha must be in (0,1)");
  auto eta_sums = fam.weighted_sums(inst.eta);
  std::optional<int> best;
  double best_tp = -kInf;
  for (int id = 0; id < fam.size(); ++id) {
    double f = 1.0 - eta_sums[id] / fam.policy_size(id);
    if (f > alpha) continue;
    if (!best || eta_sums[id] > best_tp) {
      best = id;
      best_tp = eta_sums[id];
    }
  }
  return best;
}

GapProfile gap_profile(const PolicyFamily& fam, const Instance& inst) {
  GapProfile g;
  std::vector<double> mu(inst.n);
  for (int i = 0; i < inst.n; ++i) mu[i] = 2.0 * inst.eta[i] - 1.0;
  g.mu_pi = fam.weighted_sums(mu);
  g.tp_pi = fam.weighted_sums(inst.eta);
  g.best_id = best_policy(fam, inst);
  g.delta_tilde.assign(fam.size(), 0.0);
  for (int id = 0; id < fam.size(); ++id) {
    if (id == g.best_id) continue;
    int d = fam.symdiff_size(id, g.best_id);
    g.delta_tilde[id] = std::abs(g.mu_pi[id] - g.mu_pi[g.best_id]) / d;
  }
  return g;
}

GapProfile gap_profile(const PolicyFamily& fam, const Instance& inst, double alpha) {
  GapProfile g;
  std::vector<double> mu(inst.n);
  for (int i = 0; i < inst.n; ++i) mu[i] = 2.0 * inst.eta[i] - 1.0;
  g.mu_pi = fam.weighted_sums(mu);
  g.tp_pi = fam.weighted_sums(inst.eta);
  g.best_id = best_policy(fam, inst);
  g.best_alpha_id = best_fdr_policy(fam, inst, alpha);
  g.delta_alpha.resize(fam.size());
  for (int id = 0; id < fam.size(); ++id)
    g.delta_alpha[id] = std::abs(1.0 - g.tp_pi[id] / fam.policy_size(id) - alpha);
  g.delta_tilde.assign(fam.size(), 0.0);
  if (g.best_alpha_id) {
    int anchor = *g.best_alpha_id;
    for (int id = 0; id < fam.size(); ++id) {
      if (id == anchor) continue;
      int d = fam.symdiff_size(id, anchor);
      g.delta_tilde[id] = std::abs(g.tp_pi[anchor] - g.tp_pi[id]) / d;
    }
  }
  return g;
}

ComplexityPredictors complexity_predictors(const PolicyFamily& fam, const Instance& inst,
                                           double alpha, double delta) {
  if (fam.n() != inst.n) throw std::invalid_argument("complexity_predictors: n mismatch");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("complexity_predictors: delta must be in (0,1)");
  const int n = fam.n();
  const int m = fam.size();
  GapProfile cls = gap_profile(fam, inst);
  GapProfile fdp = gap_profile(fam, inst, alpha);

  ComplexityPredictors out;
  out.per_policy.resize(m);
  std::vector<char> feasible(m, 0);
  for (int id = 0; id < m; ++id)
    feasible[id] = 1.0 - fdp.tp_pi[id] / fam.policy_size(id) <= alpha;

  for (int id = 0; id < m; ++id) {
    auto& p = out.per_policy[id];
    if (id == cls.best_id) {
      p.tau = kInf;
    } else {
      int d = fam.symdiff_size(id, cls.best_id);
      p.tau = rate(fam.complexity_pair(id, cls.best_id), d, cls.delta_tilde[id], n, delta);
    }
    p.s_fdr = rate(fam.complexity_single(id), fam.policy_size(id), fdp.delta_alpha[id], n,
                   delta);
    if (!fdp.best_alpha_id || id == *fdp.best_alpha_id) {
      p.s_tp = kInf;
    } else {
      int d = fam.symdiff_size(id, *fdp.best_alpha_id);
      p.s_tp = rate(fam.complexity_pair(id, *fdp.best_alpha_id), d, fdp.delta_tilde[id], n,
                    delta);
    }
  }

  double s_fdr_anchor = fdp.best_alpha_id ? out.per_policy[*fdp.best_alpha_id].s_fdr : kInf;
  for (int id = 0; id < m; ++id) {
    auto& p = out.per_policy[id];
    double via_tp = std::max(p.s_tp, s_fdr_anchor);
    double via_super = kInf;
    for (int other = 0; other < m; ++other) {
      if (other == id || !feasible[other]) continue;
      if (!fam.is_strict_subset(id, other)) continue;
      via_super = std::min(via_super, out.per_policy[other].s_fdr);
    }
    p.t_tp = std::min(via_tp, via_super);
    p.t_fdr = std::min(p.s_fdr, p.t_tp);
  }

  std::vector<double> elim_rate(n, 0.0), fdr_rate(n, 0.0), tp_rate(n, 0.0);
  for (int id = 0; id < m; ++id) {
    const auto& p = out.per_policy[id];
    const ItemSet& pol = fam.policy(id);
    if (id != cls.best_id) {
      ItemSet sym = pol ^ fam.policy(cls.best_id);
      for (auto i = sym.find_first(); i != ItemSet::npos; i = sym.find_next(i))
        elim_rate[i] = std::max(elim_rate[i], p.tau);
    }
    for (auto i = pol.find_first(); i != ItemSet::npos; i = pol.find_next(i))
      fdr_rate[i] = std::max(fdr_rate[i], p.t_fdr);
    if (feasible[id] && fdp.best_alpha_id && id != *fdp.best_alpha_id) {
      ItemSet sym = pol ^ fam.policy(*fdp.best_alpha_id);
      for (auto i = sym.find_first(); i != ItemSet::npos; i = sym.find_next(i))
        tp_rate[i] = std::max(tp_rate[i], p.t_tp);
    }
  }
  for (int i = 0; i < n; ++i) {
    out.elim_total += elim_rate[i];
    out.elim_total_capped += std::min(1.0, elim_rate[i]);
    out.fdr_total += fdr_rate[i] + tp_rate[i];
    out.fdr_total_capped += std::min(1.0, fdr_rate[i]) + std::min(1.0, tp_rate[i]);
  }
  return out;
}

}  // namespace acs
