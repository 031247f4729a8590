#include "acs/confidence.hpp"

#include <cmath>
#include <stdexcept>

namespace acs {

namespace {

void check_common(long t, double delta, const BoundConfig& cfg) {
  if (t < 1) throw std::invalid_argument("confidence: t must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("confidence: delta must be in (0,1)");
  if (cfg.n < 1) throw std::invalid_argument("confidence: cfg.n must be >= 1");
  if (cfg.mode == NoiseMode::Persistent && t > cfg.n)
    throw std::invalid_argument("confidence: persistent mode requires t <= n");
}

}  // namespace

RhoKappa rho_kappa(long t, int n, NoiseMode mode) {
  if (t < 1) throw std::invalid_argument("rho_kappa: t must be >= 1");
  if (mode == NoiseMode::Stochastic) return {1.0, 1.0};
  if (n < 1) throw std::invalid_argument("rho_kappa: n must be >= 1");
  if (t > n) throw std::invalid_argument("rho_kappa: persistent mode requires t <= n");
  double td = static_cast<double>(t);
  double nd = static_cast<double>(n);
  if (2 * t <= n) {
    double rho = 1.0 - (td - 1.0) / nd;
    double rad = td * (td - 1.0) / (nd * (nd - td + 1.0));
    return {rho, 4.0 / 3.0 + std::sqrt(rad)};
  }
  double rho = 1.0 - td / nd;
  double rad = (nd - td - 1.0) * (nd - td) / ((td + 1.0) * nd);
  if (rad < 0.0) rad = 0.0;
  return {rho, 4.0 / 3.0 + std::sqrt(rad)};
}

double conf_single(int pol_size, double v, long t, double delta, const BoundConfig& cfg) {
  check_common(t, delta, cfg);
  if (pol_size < 1) throw std::invalid_argument("conf_single: policy size must be >= 1");
  if (v < 1.0) throw std::invalid_argument("conf_single: weight must be >= 1");
  auto [rho, kappa] = rho_kappa(t, cfg.n, cfg.mode);
  double n = static_cast<double>(cfg.n);
  double L = std::log(n / delta);
  double var_term = 4.0 * rho * pol_size * n * v * L / static_cast<double>(t);
  double range_term = 4.0 * kappa * n * v * L / (3.0 * static_cast<double>(t));
  return std::sqrt(var_term) + range_term;
}

double conf_pair(int d, double v, long t, double delta, const BoundConfig& cfg) {
  check_common(t, delta, cfg);
  if (d < 0) throw std::invalid_argument("conf_pair: distance must be >= 0");
  if (d == 0) return 0.0;
  if (v < 1.0) throw std::invalid_argument("conf_pair: weight must be >= 1");
  auto [rho, kappa] = rho_kappa(t, cfg.n, cfg.mode);
  double n = static_cast<double>(cfg.n);
  double L = std::log(n / delta);
  double var_term = 8.0 * rho * d * n * v * L / static_cast<double>(t);
  double range_term = 4.0 * kappa * n * v * L / (3.0 * static_cast<double>(t));
  return std::sqrt(var_term) + range_term;
}

double conf_threshold_pair(int s, int t_prime, int n, long T, double delta) {
  if (n < 1) throw std::invalid_argument("conf_threshold_pair: n must be >= 1");
  if (s < 0 || s > n || t_prime < 0 || t_prime > n)
    throw std::invalid_argument("conf_threshold_pair: positions must lie in [0, n]");
  if (T < 1) throw std::invalid_argument("conf_threshold_pair: T must be >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("conf_threshold_pair: delta must be in (0,1)");
  int d = std::abs(s - t_prime);
  if (d == 0) return 0.0;
  double dd = static_cast<double>(d);
  double nd = static_cast<double>(n);
  double Td = static_cast<double>(T);
  double lg = std::log2(4.0 * dd);
  double logterm = std::log(2.0 * lg * lg / (3.0 * delta));
  double var_term = std::sqrt((2.0 * dd / (nd * Td)) * (43.0 + 2.0 * std::sqrt(2.0) * logterm));
  double range_term = (12.0 + logterm) / (3.0 * Td);
  return var_term + range_term;
}

double conf_single_for(const PolicyFamily& fam, int id, long t, double delta,
                       const BoundConfig& cfg) {
  if (cfg.n != fam.n()) throw std::invalid_argument("conf_single_for: cfg.n mismatch");
  return conf_single(fam.policy_size(id), fam.complexity_single(id), t, delta, cfg);
}

double conf_pair_for(const PolicyFamily& fam, int a, int b, long t, double delta,
                     const BoundConfig& cfg) {
  if (cfg.n != fam.n()) throw std::invalid_argument("conf_pair_for: cfg.n mismatch");
  if (a == b) return 0.0;
  if (cfg.kind == BoundKind::ThresholdSpecial) {
    if (fam.kind() != FamilyKind::Thresholds)
      throw std::invalid_argument("conf_pair_for: threshold bound requires a threshold family");
    if (cfg.mode == NoiseMode::Persistent && t > cfg.n)
      throw std::invalid_argument("conf_pair_for: persistent mode requires t <= n");
    return cfg.n * conf_threshold_pair(a + 1, b + 1, cfg.n, t, delta);
  }
  int d = fam.symdiff_size(a, b);
  return conf_pair(d, fam.complexity_pair(a, b), t, delta, cfg);
}

}  // namespace acs
