#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ebseq/convolved.hpp"
#include "ebseq/sparsity.hpp"

namespace ebseq {

enum class ExperimentKind {
  coverage,             // moment-ball coverage / radius of the true signal
  risk,                 // posterior d_q spread + point-estimator d_q losses
  mean_suboptimality,   // posterior-mean vs posterior-median d_q loss at theta = 0
};

enum class AlphaRule {
  mmle,    // fit alpha by marginal maximum likelihood per replicate
  fixed,   // use ExperimentConfig::fixed_alpha
  oracle,  // multiplier * (s / n) * log^{delta/2}(n / s)
};

const char* experiment_kind_name(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& name);
const char* alpha_rule_name(AlphaRule rule);
AlphaRule parse_alpha_rule(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::coverage;
  long n = 500;
  long s = 25;
  double q = 2.0;
  SlabFamily family = SlabFamily::heavy_tail;
  double delta = 1.0;
  double scale = 1.0;  // laplace
  SignalSpec signal{};
  AlphaRule alpha_rule = AlphaRule::mmle;
  double fixed_alpha = 0.1;
  double oracle_multiplier = 1.0;
  double M = 20.0;     // moment-ball multiplier
  double beta = 0.05;  // quoted credibility shortfall (M defaults to 1/beta upstream)
  long replicates = 100;
  std::uint64_t seed = 1;

  void validate() const;                  // throws config_error
  std::vector<std::string> warnings() const;  // non-fatal regime notes
  SlabModel slab_model() const;
  double oracle_alpha() const;
};

struct ReplicateRecord {
  long replicate = 0;  // 1-based
  bool failed = false;
  std::string failure;
  // coverage kind:
  std::optional<bool> covered;
  std::optional<double> radius;      // ball radius M * v_q
  // all kinds:
  std::optional<double> alpha_hat;
  // risk kinds:
  std::optional<double> risk_q;              // v_q centred at the truth
  std::optional<double> point_risk_median;   // d_q(median vector, theta0)
  std::optional<double> point_risk_mean;     // d_q(mean vector, theta0)
};

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

// Wilson score interval for a binomial proportion.
WilsonInterval wilson_interval(long successes, long trials, double z);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<double> theta0;
  double alpha_n = 0.0;
  std::vector<ReplicateRecord> records;
  long completed = 0;
  long failures = 0;
  // aggregates over completed replicates:
  double coverage_rate = 0.0;
  WilsonInterval coverage_ci{};
  double mean_radius = 0.0;
  double mean_diameter_bound = 0.0;
  double mean_alpha_hat = 0.0;
  double mean_risk_q = 0.0;
  double mean_point_risk_median = 0.0;
  double mean_point_risk_mean = 0.0;
  std::vector<std::string> warnings;
};

// Runs the experiment with replicate-level parallelism (EBSEQ_WORKERS or
// hardware concurrency); per-replicate records are bitwise independent of the
// worker count.  A numerical_error inside one replicate marks that record
// failed and the run continues.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace ebseq
