#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "acs/confidence.hpp"
#include "acs/core.hpp"
#include "acs/result.hpp"

namespace acs {

// eta_i = 1/2 + sign(z - i/n)/2 * h * |z - i/n|^exponent, items i = 1..n,
// sign(0) = +1.
Instance gen_tsybakov(int n, double h, double noise_exponent, double z);

// Persistent 0/1 pool: eta_i ~ Bernoulli(beta) for i <= z, 0 beyond the band.
Instance gen_beta_band(int n, double beta, int z, std::uint64_t seed);

struct GeneratorConfig {
  enum class Kind { Tsybakov, BetaBand, ExplicitEta };
  Kind kind = Kind::Tsybakov;
  int n = 0;
  double h = 1.0;
  double noise_exponent = 0.0;
  double z = 0.5;  // tsybakov boundary in [0,1]
  double beta = 0.5;
  int band_end = 1;  // beta band: last item that may be positive
  std::vector<double> eta;
};

struct FamilyConfig {
  FamilyKind kind = FamilyKind::Thresholds;
  std::optional<WeightMode> weight_mode;
  std::vector<std::vector<int>> policies;  // explicit families, 1-based items
};

enum class Algorithm { Classify, FdrControl, PassiveClassify, PassiveFdr };

struct ExperimentConfig {
  GeneratorConfig generator;
  FamilyConfig family;
  Algorithm algorithm = Algorithm::Classify;
  NoiseMode mode = NoiseMode::Stochastic;
  std::optional<double> alpha;  // required for the FDR algorithms
  double delta = 0.1;
  int trials = 1;
  std::uint64_t seed = 0;
  long cap = 1L << 26;
  BoundKind bound = BoundKind::GeneralVC;
  bool record_trace = false;

  void validate() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

int generator_n(const GeneratorConfig& g);
PolicyFamily build_family(const FamilyConfig& fc, int n);

// Instantiates the pool for one trial; persistent modes realize labels from
// a stream derived from the trial seed.
Instance realize_instance(const GeneratorConfig& g, NoiseMode mode,
                          std::uint64_t trial_seed);

struct ExperimentResult {
  std::vector<TrialResult> trials;
  double mean_labels = 0.0;
  double median_labels = 0.0;
  double success_rate = 0.0;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// One line per epoch record plus a final line per trial.
void write_trace_jsonl(std::ostream& os, const ExperimentConfig& cfg,
                       const ExperimentResult& res);

// One row per config, fixed column order, full-precision floats.
void sweep_csv(std::ostream& os, const std::vector<ExperimentConfig>& grid);

// Monte Carlo coverage check of the deviation bounds on threshold families
// with fresh uniform eta each replication.
enum class CoverageKind {
  SingleStochastic,
  PairStochastic,
  ThresholdPair,
  SinglePersistent,
  PairPersistent,
};

struct CoverageSpec {
  CoverageKind kind = CoverageKind::SingleStochastic;
  int n = 100;
  long t = 64;
  double delta = 0.1;
  int reps = 1000;
  std::uint64_t seed = 0;
};

struct CoverageReport {
  int reps = 0;
  int violations = 0;
  double rate = 0.0;
  double max_ratio = 0.0;  // worst observed |deviation| / radius
};

CoverageReport run_coverage(const CoverageSpec& spec);

const char* coverage_kind_name(CoverageKind k);
std::optional<CoverageKind> coverage_kind_from_name(const std::string& s);

}  // namespace acs
