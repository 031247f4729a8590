#include "acs/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "acs/elim.hpp"
#include "acs/fdrctl.hpp"
#include "acs/metrics.hpp"
#include "acs/rng.hpp"

namespace acs {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Classify: return "classify";
    case Algorithm::FdrControl: return "fdr";
    case Algorithm::PassiveClassify: return "passive_classify";
    case Algorithm::PassiveFdr: return "passive_fdr";
  }
  return "classify";
}

Algorithm algorithm_from_name(const std::string& s) {
  if (s == "classify") return Algorithm::Classify;
  if (s == "fdr") return Algorithm::FdrControl;
  if (s == "passive_classify") return Algorithm::PassiveClassify;
  if (s == "passive_fdr") return Algorithm::PassiveFdr;
  throw std::invalid_argument("config: unknown algorithm " + s);
}

const char* generator_name(GeneratorConfig::Kind k) {
  switch (k) {
    case GeneratorConfig::Kind::Tsybakov: return "tsybakov";
    case GeneratorConfig::Kind::BetaBand: return "beta_band";
    case GeneratorConfig::Kind::ExplicitEta: return "explicit_eta";
  }
  return "tsybakov";
}

const char* mode_name(NoiseMode m) {
  return m == NoiseMode::Persistent ? "persistent" : "stochastic";
}

NoiseMode mode_from_name(const std::string& s) {
  if (s == "stochastic") return NoiseMode::Stochastic;
  if (s == "persistent") return NoiseMode::Persistent;
  throw std::invalid_argument("config: unknown mode " + s);
}

const char* family_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::Thresholds: return "thresholds";
    case FamilyKind::Intervals: return "intervals";
    case FamilyKind::Explicit: return "explicit";
  }
  return "thresholds";
}

bool is_fdr(Algorithm a) {
  return a == Algorithm::FdrControl || a == Algorithm::PassiveFdr;
}

// Persistent trials are scored against the realized pool, which is the
// population the engine actually samples.
Instance oracle_view(const Instance& inst) {
  if (inst.noise_mode == NoiseMode::Persistent)
    return Instance::persistent_labels(*inst.realized_labels);
  return inst;
}

}  // namespace

Instance gen_tsybakov(int n, double h, double noise_exponent, double z) {
  if (n < 1) throw std::invalid_argument("gen_tsybakov: n must be >= 1");
  if (!(h > 0.0 && h <= 1.0)) throw std::invalid_argument("gen_tsybakov: h must be in (0,1]");
  if (!(z >= 0.0 && z <= 1.0)) throw std::invalid_argument("gen_tsybakov: z must be in [0,1]");
  if (noise_exponent < 0.0)
    throw std::invalid_argument("gen_tsybakov: exponent must be >= 0");
  std::vector<double> eta(n);
  for (int i = 1; i <= n; ++i) {
    double x = z - static_cast<double>(i) / n;
    double sign = x < 0.0 ? -1.0 : 1.0;
    eta[i - 1] = 0.5 + sign * 0.5 * h * std::pow(std::abs(x), noise_exponent);
  }
  return Instance::stochastic(std::move(eta));
}

Instance gen_beta_band(int n, double beta, int z, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_beta_band: n must be >= 1");
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("gen_beta_band: beta must be in (0,1)");
  if (z < 1 || z > n) throw std::invalid_argument("gen_beta_band: z must be in [1,n]");
  Rng rng(seed);
  std::vector<int> labels(n, 0);
  for (int i = 0; i < z; ++i) labels[i] = rng.bernoulli(beta) ? 1 : 0;
  return Instance::persistent_labels(std::move(labels));
}

int generator_n(const GeneratorConfig& g) {
  if (g.kind == GeneratorConfig::Kind::ExplicitEta) return static_cast<int>(g.eta.size());
  return g.n;
}

PolicyFamily build_family(const FamilyConfig& fc, int n) {
  switch (fc.kind) {
    case FamilyKind::Thresholds:
      return PolicyFamily::thresholds(n, fc.weight_mode.value_or(WeightMode::AnalyticVC));
    case FamilyKind::Intervals:
      return PolicyFamily::intervals(n, fc.weight_mode.value_or(WeightMode::AnalyticVC));
    case FamilyKind::Explicit:
      return PolicyFamily::explicit_sets(n, fc.policies,
                                         fc.weight_mode.value_or(WeightMode::SauerCount));
  }
  throw std::logic_error("build_family: bad kind");
}

Instance realize_instance(const GeneratorConfig& g, NoiseMode mode,
                          std::uint64_t trial_seed) {
  switch (g.kind) {
    case GeneratorConfig::Kind::Tsybakov: {
      Instance base = gen_tsybakov(g.n, g.h, g.noise_exponent, g.z);
      if (mode == NoiseMode::Persistent)
        return Instance::persistent(base.eta, mix_seed(trial_seed, 7));
      return base;
    }
    case GeneratorConfig::Kind::BetaBand:
      return gen_beta_band(g.n, g.beta, g.band_end, mix_seed(trial_seed, 7));
    case GeneratorConfig::Kind::ExplicitEta:
      if (mode == NoiseMode::Persistent)
        return Instance::persistent(g.eta, mix_seed(trial_seed, 7));
      return Instance::stochastic(g.eta);
  }
  throw std::logic_error("realize_instance: bad kind");
}

void ExperimentConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("config: delta must be in (0,1)");
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (cap < 1) throw std::invalid_argument("config: cap must be >= 1");
  const int n = generator_n(generator);
  if (n < 1) throw std::invalid_argument("config: pool size must be >= 1");
  switch (generator.kind) {
    case GeneratorConfig::Kind::Tsybakov:
      if (!(generator.h > 0.0 && generator.h <= 1.0))
        throw std::invalid_argument("config: h must be in (0,1]");
      if (!(generator.z >= 0.0 && generator.z <= 1.0))
        throw std::invalid_argument("config: z must be in [0,1]");
      if (generator.noise_exponent < 0.0)
        throw std::invalid_argument("config: exponent must be >= 0");
      break;
    case GeneratorConfig::Kind::BetaBand:
      if (mode != NoiseMode::Persistent)
        throw std::invalid_argument("config: beta_band requires persistent mode");
      if (!(generator.beta > 0.0 && generator.beta < 1.0))
        throw std::invalid_argument("config: beta must be in (0,1)");
      if (generator.band_end < 1 || generator.band_end > n)
        throw std::invalid_argument("config: band end must be in [1,n]");
      break;
    case GeneratorConfig::Kind::ExplicitEta:
      for (double e : generator.eta)
        if (!(e >= 0.0 && e <= 1.0))
          throw std::invalid_argument("config: eta values must be in [0,1]");
      break;
  }
  if (is_fdr(algorithm)) {
    if (!alpha) throw std::invalid_argument("config: fdr algorithms require alpha");
    if (!(*alpha > 0.0 && *alpha < 1.0))
      throw std::invalid_argument("config: alpha must be in (0,1)");
  }
  if (bound == BoundKind::ThresholdSpecial && family.kind != FamilyKind::Thresholds)
    throw std::invalid_argument("config: threshold_special bound requires a threshold family");
  if (family.kind == FamilyKind::Explicit && family.policies.empty())
    throw std::invalid_argument("config: explicit family needs policies");
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  const auto& jg = j.at("generator");
  const std::string gk = jg.at("kind").get<std::string>();
  if (gk == "tsybakov") {
    c.generator.kind = GeneratorConfig::Kind::Tsybakov;
    c.generator.n = jg.at("n").get<int>();
    c.generator.h = jg.value("h", 1.0);
    c.generator.noise_exponent = jg.value("exponent", 0.0);
    c.generator.z = jg.value("z", 0.5);
  } else if (gk == "beta_band") {
    c.generator.kind = GeneratorConfig::Kind::BetaBand;
    c.generator.n = jg.at("n").get<int>();
    c.generator.beta = jg.at("beta").get<double>();
    c.generator.band_end = jg.at("z").get<int>();
  } else if (gk == "explicit_eta") {
    c.generator.kind = GeneratorConfig::Kind::ExplicitEta;
    c.generator.eta = jg.at("eta").get<std::vector<double>>();
  } else {
    throw std::invalid_argument("config: unknown generator " + gk);
  }
  if (j.contains("family")) {
    const auto& jf = j.at("family");
    const std::string fk = jf.value("kind", std::string("thresholds"));
    if (fk == "thresholds")
      c.family.kind = FamilyKind::Thresholds;
    else if (fk == "intervals")
      c.family.kind = FamilyKind::Intervals;
    else if (fk == "explicit")
      c.family.kind = FamilyKind::Explicit;
    else
      throw std::invalid_argument("config: unknown family kind " + fk);
    if (jf.contains("weight_mode")) {
      const std::string w = jf.at("weight_mode").get<std::string>();
      if (w == "analytic_vc")
        c.family.weight_mode = WeightMode::AnalyticVC;
      else if (w == "sauer_count")
        c.family.weight_mode = WeightMode::SauerCount;
      else
        throw std::invalid_argument("config: unknown weight_mode " + w);
    }
    if (jf.contains("policies"))
      c.family.policies = jf.at("policies").get<std::vector<std::vector<int>>>();
  }
  c.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());
  c.mode = mode_from_name(j.value("mode", std::string("stochastic")));
  if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
  c.delta = j.value("delta", 0.1);
  c.trials = j.value("trials", 1);
  c.seed = j.value("seed", std::uint64_t{0});
  c.cap = j.value("cap", long{1L << 26});
  const std::string b = j.value("bound", std::string("general_vc"));
  if (b == "general_vc")
    c.bound = BoundKind::GeneralVC;
  else if (b == "threshold_special")
    c.bound = BoundKind::ThresholdSpecial;
  else
    throw std::invalid_argument("config: unknown bound " + b);
  c.record_trace = j.value("record_trace", false);
  c.validate();
  return c;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json jg;
  jg["kind"] = generator_name(generator.kind);
  switch (generator.kind) {
    case GeneratorConfig::Kind::Tsybakov:
      jg["n"] = generator.n;
      jg["h"] = generator.h;
      jg["exponent"] = generator.noise_exponent;
      jg["z"] = generator.z;
      break;
    case GeneratorConfig::Kind::BetaBand:
      jg["n"] = generator.n;
      jg["beta"] = generator.beta;
      jg["z"] = generator.band_end;
      break;
    case GeneratorConfig::Kind::ExplicitEta:
      jg["eta"] = generator.eta;
      break;
  }
  nlohmann::json jf;
  jf["kind"] = family_name(family.kind);
  if (family.weight_mode)
    jf["weight_mode"] =
        *family.weight_mode == WeightMode::AnalyticVC ? "analytic_vc" : "sauer_count";
  if (!family.policies.empty()) jf["policies"] = family.policies;
  nlohmann::json j;
  j["generator"] = jg;
  j["family"] = jf;
  j["algorithm"] = algorithm_name(algorithm);
  j["mode"] = mode_name(mode);
  if (alpha) j["alpha"] = *alpha;
  j["delta"] = delta;
  j["trials"] = trials;
  j["seed"] = seed;
  j["cap"] = cap;
  j["bound"] = bound == BoundKind::GeneralVC ? "general_vc" : "threshold_special";
  j["record_trace"] = record_trace;
  return j;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const int n = generator_n(cfg.generator);
  PolicyFamily fam = build_family(cfg.family, n);
  ExperimentResult out;
  out.trials.reserve(cfg.trials);
  std::vector<double> labels;
  labels.reserve(cfg.trials);
  long correct_count = 0;

  for (int i = 0; i < cfg.trials; ++i) {
    const std::uint64_t trial_seed = mix_seed(cfg.seed, i);
    Instance inst = realize_instance(cfg.generator, cfg.mode, trial_seed);
    TrialResult tr;
    if (is_fdr(cfg.algorithm)) {
      FdrOptions o;
      o.bound_kind = cfg.bound;
      o.seed = trial_seed;
      o.step_cap = cfg.cap;
      o.passive = cfg.algorithm == Algorithm::PassiveFdr;
      o.record_trace = cfg.record_trace;
      tr = run_fdr(inst, fam, *cfg.alpha, cfg.delta, o);
      auto oracle = best_fdr_policy(fam, oracle_view(inst), *cfg.alpha);
      tr.correct = oracle ? (tr.winner && *tr.winner == *oracle) : !tr.winner.has_value();
    } else {
      ElimOptions o;
      o.bound_kind = cfg.bound;
      o.seed = trial_seed;
      o.step_cap = cfg.cap;
      o.passive = cfg.algorithm == Algorithm::PassiveClassify;
      o.record_trace = cfg.record_trace;
      tr = run_classify(inst, fam, cfg.delta, o);
      int oracle = best_policy(fam, oracle_view(inst));
      tr.correct = tr.winner && *tr.winner == oracle;
    }
    labels.push_back(static_cast<double>(tr.labels_used));
    if (tr.correct && *tr.correct) ++correct_count;
    out.trials.push_back(std::move(tr));
  }

  double sum = 0.0;
  for (double v : labels) sum += v;
  out.mean_labels = sum / labels.size();
  std::vector<double> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  const size_t m = sorted.size();
  out.median_labels =
      m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  out.success_rate = static_cast<double>(correct_count) / cfg.trials;
  return out;
}

void write_trace_jsonl(std::ostream& os, const ExperimentConfig& cfg,
                       const ExperimentResult& res) {
  const bool fdr_run = is_fdr(cfg.algorithm);
  for (size_t i = 0; i < res.trials.size(); ++i) {
    const TrialResult& tr = res.trials[i];
    for (const EpochRecord& rec : tr.trace) {
      nlohmann::json j;
      j["trial"] = i;
      j["k"] = rec.k;
      j["t"] = rec.t;
      j["A"] = rec.active.size();
      j["T"] = rec.symdiff_region.size();
      if (rec.controlled) j["C"] = rec.controlled->size();
      if (rec.superset_record) j["R"] = rec.superset_record->size();
      if (rec.union_region) j["S"] = rec.union_region->size();
      j["labels"] = rec.labels;
      os << j.dump() << '\n';
    }
    nlohmann::json j;
    j["trial"] = i;
    if (tr.winner)
      j["winner"] = *tr.winner;
    else
      j["winner"] = nullptr;
    j["labels"] = tr.labels_used;
    j["epochs"] = tr.epochs;
    j["steps"] = tr.steps;
    j["flags"] = tr.flags;
    if (fdr_run) {
      j["tp_hat"] = tr.tp_hat;
      j["frozen_fdr_hat"] = tr.frozen_fdr_hat;
    }
    if (tr.correct)
      j["correct"] = *tr.correct;
    else
      j["correct"] = nullptr;
    os << j.dump() << '\n';
  }
}

void sweep_csv(std::ostream& os, const std::vector<ExperimentConfig>& grid) {
  os << "generator,n,h,exponent,z,beta,family,algorithm,mode,alpha,delta,trials,seed,"
        "mean_labels,median_labels,success_rate\n";
  for (const ExperimentConfig& cfg : grid) {
    ExperimentResult res = run_experiment(cfg);
    const GeneratorConfig& g = cfg.generator;
    os << generator_name(g.kind) << ',' << generator_n(g) << ',';
    if (g.kind == GeneratorConfig::Kind::Tsybakov)
      os << fmt(g.h) << ',' << fmt(g.noise_exponent) << ',' << fmt(g.z) << ',' << ',';
    else if (g.kind == GeneratorConfig::Kind::BetaBand)
      os << ',' << ',' << g.band_end << ',' << fmt(g.beta) << ',';
    else
      os << ',' << ',' << ',' << ',';
    os << family_name(cfg.family.kind) << ',' << algorithm_name(cfg.algorithm) << ','
       << mode_name(cfg.mode) << ',';
    if (cfg.alpha) os << fmt(*cfg.alpha);
    os << ',' << fmt(cfg.delta) << ',' << cfg.trials << ',' << cfg.seed << ','
       << fmt(res.mean_labels) << ',' << fmt(res.median_labels) << ','
       << fmt(res.success_rate) << '\n';
  }
}

const char* coverage_kind_name(CoverageKind k) {
  switch (k) {
    case CoverageKind::SingleStochastic: return "single";
    case CoverageKind::PairStochastic: return "pair";
    case CoverageKind::ThresholdPair: return "threshold";
    case CoverageKind::SinglePersistent: return "persistent_single";
    case CoverageKind::PairPersistent: return "persistent_pair";
  }
  return "single";
}

std::optional<CoverageKind> coverage_kind_from_name(const std::string& s) {
  if (s == "single") return CoverageKind::SingleStochastic;
  if (s == "pair") return CoverageKind::PairStochastic;
  if (s == "threshold") return CoverageKind::ThresholdPair;
  if (s == "persistent_single") return CoverageKind::SinglePersistent;
  if (s == "persistent_pair") return CoverageKind::PairPersistent;
  return std::nullopt;
}

CoverageReport run_coverage(const CoverageSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("coverage: n must be >= 2");
  if (spec.t < 1) throw std::invalid_argument("coverage: t must be >= 1");
  if (spec.reps < 1) throw std::invalid_argument("coverage: reps must be >= 1");
  if (!(spec.delta > 0.0 && spec.delta < 1.0))
    throw std::invalid_argument("coverage: delta must be in (0,1)");
  const bool persistent = spec.kind == CoverageKind::SinglePersistent ||
                          spec.kind == CoverageKind::PairPersistent;
  if (persistent && spec.t > spec.n)
    throw std::invalid_argument("coverage: persistent kinds require t <= n");
  const int n = spec.n;
  const NoiseMode mode = persistent ? NoiseMode::Persistent : NoiseMode::Stochastic;
  BoundConfig cfg{mode, BoundKind::GeneralVC, n};

  CoverageReport rep;
  rep.reps = spec.reps;
  for (int r = 0; r < spec.reps; ++r) {
    Rng rng(mix_seed(spec.seed, r));
    std::vector<double> eta(n);
    for (double& e : eta) e = rng.uniform01();

    const bool single = spec.kind == CoverageKind::SingleStochastic ||
                        spec.kind == CoverageKind::SinglePersistent;
    int a = rng.uniform_below(n);
    int b = 0;
    if (!single) {
      b = rng.uniform_below(n - 1);
      if (b >= a) ++b;
      if (a > b) std::swap(a, b);  // threshold ids: symdiff is (a, b]
    }

    double stat = 0.0;   // sum-scale statistic
    double truth = 0.0;  // its target
    if (persistent) {
      std::vector<int> labels(n);
      for (int i = 0; i < n; ++i) labels[i] = rng.bernoulli(eta[i]) ? 1 : 0;
      IndexStream stream(StreamMode::WithoutReplacement, n, rng.next_u64());
      for (long s = 0; s < spec.t; ++s) {
        int i = stream.next();
        if (single) {
          if (i <= a) stat += labels[i];
        } else if (i > a && i <= b) {
          stat += 2.0 * labels[i] - 1.0;
        }
      }
      for (int i = 0; i < n; ++i) {
        if (single) {
          if (i <= a) truth += labels[i];
        } else if (i > a && i <= b) {
          truth += 2.0 * labels[i] - 1.0;
        }
      }
    } else {
      for (long s = 0; s < spec.t; ++s) {
        int i = rng.uniform_below(n);
        int y = rng.bernoulli(eta[i]) ? 1 : 0;
        if (single) {
          if (i <= a) stat += y;
        } else if (i > a && i <= b) {
          stat += 2.0 * y - 1.0;
        }
      }
      for (int i = 0; i < n; ++i) {
        if (single) {
          if (i <= a) truth += eta[i];
        } else if (i > a && i <= b) {
          truth += 2.0 * eta[i] - 1.0;
        }
      }
    }

    const double dev = std::abs(stat * n / static_cast<double>(spec.t) - truth);
    double radius;
    switch (spec.kind) {
      case CoverageKind::SingleStochastic:
      case CoverageKind::SinglePersistent:
        radius = conf_single(a + 1, 1.0, spec.t, spec.delta, cfg);
        break;
      case CoverageKind::ThresholdPair:
        radius = n * conf_threshold_pair(a + 1, b + 1, n, spec.t, spec.delta);
        break;
      default:
        radius = conf_pair(b - a, 1.0, spec.t, spec.delta, cfg);
        break;
    }
    if (dev > radius) ++rep.violations;
    if (radius > 0.0) rep.max_ratio = std::max(rep.max_ratio, dev / radius);
  }
  rep.rate = static_cast<double>(rep.violations) / rep.reps;
  return rep;
}

}  // namespace acs
