#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "acs/harness.hpp"
#include "acs/metrics.hpp"
#include "acs/rng.hpp"

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> mode;
  std::optional<double> delta;
  std::optional<double> alpha;
  std::optional<long> cap;
  std::optional<std::string> bound;
};

acs::ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return acs::ExperimentConfig::from_json(j);
}

void apply_overrides(acs::ExperimentConfig& cfg, const Overrides& ov) {
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.trials) cfg.trials = *ov.trials;
  if (ov.mode) {
    if (*ov.mode == "stochastic")
      cfg.mode = acs::NoiseMode::Stochastic;
    else if (*ov.mode == "persistent")
      cfg.mode = acs::NoiseMode::Persistent;
    else
      throw std::runtime_error("unknown mode: " + *ov.mode);
  }
  if (ov.delta) cfg.delta = *ov.delta;
  if (ov.alpha) cfg.alpha = *ov.alpha;
  if (ov.cap) cfg.cap = *ov.cap;
  if (ov.bound) {
    if (*ov.bound == "general_vc")
      cfg.bound = acs::BoundKind::GeneralVC;
    else if (*ov.bound == "threshold_special")
      cfg.bound = acs::BoundKind::ThresholdSpecial;
    else
      throw std::runtime_error("unknown bound: " + *ov.bound);
  }
}

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--seed", ov.seed, "base seed");
  cmd->add_option("--trials", ov.trials, "number of trials");
  cmd->add_option("--mode", ov.mode, "stochastic|persistent");
  cmd->add_option("--delta", ov.delta, "failure probability");
  cmd->add_option("--alpha", ov.alpha, "FDR target");
  cmd->add_option("--cap", ov.cap, "hard cap on draws per trial");
  cmd->add_option("--bound", ov.bound, "general_vc|threshold_special");
}

int run_engine_command(const std::string& config_path, const Overrides& ov,
                       const std::string& out_path, bool passive, bool fdr_cmd) {
  acs::ExperimentConfig cfg = load_config(config_path);
  apply_overrides(cfg, ov);
  if (fdr_cmd)
    cfg.algorithm = passive ? acs::Algorithm::PassiveFdr : acs::Algorithm::FdrControl;
  else
    cfg.algorithm = passive ? acs::Algorithm::PassiveClassify : acs::Algorithm::Classify;
  if (!out_path.empty()) cfg.record_trace = true;
  cfg.validate();
  acs::ExperimentResult res = acs::run_experiment(cfg);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    acs::write_trace_jsonl(out, cfg, res);
  }
  std::printf("trials=%d mean_labels=%.17g median_labels=%.17g success_rate=%.17g\n",
              cfg.trials, res.mean_labels, res.median_labels, res.success_rate);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive sampling harness: active classification and FDR control"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  bool passive = false;
  Overrides ov;

  auto* classify = app.add_subcommand("classify", "run the elimination classifier");
  classify->add_option("--config", config_path, "experiment config JSON")->required();
  classify->add_option("--out", out_path, "trace JSONL output path");
  classify->add_flag("--passive", passive, "disable the rejection-sampling gate");
  add_override_flags(classify, ov);

  auto* fdr = app.add_subcommand("fdr", "run active FDR control");
  fdr->add_option("--config", config_path, "experiment config JSON")->required();
  fdr->add_option("--out", out_path, "trace JSONL output path");
  fdr->add_flag("--passive", passive, "disable the rejection-sampling gate");
  add_override_flags(fdr, ov);

  auto* sweep = app.add_subcommand("sweep", "run a config grid and emit CSV");
  sweep->add_option("--config", config_path, "JSON with an \"experiments\" array")
      ->required();
  sweep->add_option("--out", out_path, "CSV output path (default stdout)");

  auto* coverage = app.add_subcommand("coverage", "Monte Carlo check of the bounds");
  std::string cov_kind = "single";
  int cov_n = 100, cov_reps = 1000;
  long cov_t = 64;
  double cov_delta = 0.1;
  std::uint64_t cov_seed = 0;
  coverage->add_option("--kind", cov_kind,
                       "single|pair|threshold|persistent_single|persistent_pair");
  coverage->add_option("--n", cov_n, "pool size");
  coverage->add_option("--t", cov_t, "draw count");
  coverage->add_option("--reps", cov_reps, "replications");
  coverage->add_option("--delta", cov_delta, "nominal failure probability");
  coverage->add_option("--seed", cov_seed, "base seed");

  auto* predict = app.add_subcommand("predict", "dump complexity predictors");
  predict->add_option("--config", config_path, "experiment config JSON")->required();
  predict->add_option("--out", out_path, "JSON output path (default stdout)");
  add_override_flags(predict, ov);

  CLI11_PARSE(app, argc, argv);

  try {
    if (classify->parsed()) return run_engine_command(config_path, ov, out_path, passive, false);
    if (fdr->parsed()) return run_engine_command(config_path, ov, out_path, passive, true);

    if (sweep->parsed()) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error("cannot open config file: " + config_path);
      nlohmann::json j;
      in >> j;
      const nlohmann::json& arr = j.is_array() ? j : j.at("experiments");
      std::vector<acs::ExperimentConfig> grid;
      for (const auto& e : arr) grid.push_back(acs::ExperimentConfig::from_json(e));
      if (out_path.empty()) {
        acs::sweep_csv(std::cout, grid);
      } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open output file: " + out_path);
        acs::sweep_csv(out, grid);
      }
      return 0;
    }

    if (coverage->parsed()) {
      acs::CoverageSpec spec;
      auto kind = acs::coverage_kind_from_name(cov_kind);
      if (!kind) throw std::runtime_error("unknown coverage kind: " + cov_kind);
      spec.kind = *kind;
      spec.n = cov_n;
      spec.t = cov_t;
      spec.delta = cov_delta;
      spec.reps = cov_reps;
      spec.seed = cov_seed;
      acs::CoverageReport rep = acs::run_coverage(spec);
      std::printf("kind=%s n=%d t=%ld reps=%d violations=%d rate=%.17g max_ratio=%.17g\n",
                  acs::coverage_kind_name(spec.kind), spec.n, spec.t, rep.reps,
                  rep.violations, rep.rate, rep.max_ratio);
      return 0;
    }

    if (predict->parsed()) {
      acs::ExperimentConfig cfg = load_config(config_path);
      apply_overrides(cfg, ov);
      const int n = acs::generator_n(cfg.generator);
      acs::PolicyFamily fam = acs::build_family(cfg.family, n);
      acs::Instance inst =
          acs::realize_instance(cfg.generator, cfg.mode, acs::mix_seed(cfg.seed, 0));
      const double alpha = cfg.alpha.value_or(0.5);
      acs::ComplexityPredictors pred =
          acs::complexity_predictors(fam, inst, alpha, cfg.delta);
      nlohmann::json j;
      nlohmann::json pols = nlohmann::json::object();
      for (int id = 0; id < fam.size(); ++id) {
        const auto& p = pred.per_policy[id];
        pols[std::to_string(id)] = {{"tau", p.tau},
                                    {"s_fdr", p.s_fdr},
                                    {"s_tp", p.s_tp},
                                    {"t_fdr", p.t_fdr},
                                    {"t_tp", p.t_tp}};
      }
      j["policies"] = pols;
      j["totals"] = {{"elim", pred.elim_total},
                     {"elim_capped", pred.elim_total_capped},
                     {"fdr", pred.fdr_total},
                     {"fdr_capped", pred.fdr_total_capped}};
      if (out_path.empty()) {
        std::cout << j.dump(2) << '\n';
      } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open output file: " + out_path);
        out << j.dump(2) << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
