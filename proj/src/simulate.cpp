#include "ebseq/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "ebseq/credible.hpp"
#include "ebseq/errors.hpp"
#include "ebseq/mmle.hpp"
#include "ebseq/posterior.hpp"
#include "ebseq/reduce.hpp"
#include "ebseq/rng.hpp"
#include "ebseq/thresholds.hpp"

namespace ebseq {

const char* experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::coverage: return "coverage";
    case ExperimentKind::risk: return "risk";
    case ExperimentKind::mean_suboptimality: return "mean_suboptimality";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "coverage") return ExperimentKind::coverage;
  if (name == "risk") return ExperimentKind::risk;
  if (name == "mean_suboptimality") return ExperimentKind::mean_suboptimality;
  throw config_error("unknown experiment kind: " + name);
}

const char* alpha_rule_name(AlphaRule rule) {
  switch (rule) {
    case AlphaRule::mmle: return "mmle";
    case AlphaRule::fixed: return "fixed";
    case AlphaRule::oracle: return "oracle";
  }
  return "?";
}

AlphaRule parse_alpha_rule(const std::string& name) {
  if (name == "mmle") return AlphaRule::mmle;
  if (name == "fixed") return AlphaRule::fixed;
  if (name == "oracle") return AlphaRule::oracle;
  throw config_error("unknown alpha rule: " + name);
}

SlabModel ExperimentConfig::slab_model() const {
  SlabModel slab;
  slab.family = family;
  slab.delta = delta;
  slab.scale = scale;
  return slab;
}

double ExperimentConfig::oracle_alpha() const {
  const double dn = static_cast<double>(n);
  const double ds = static_cast<double>(s);
  const double raw = oracle_multiplier * (ds / dn) *
                     std::pow(std::log(dn / ds), 0.5 * delta);
  return std::clamp(raw, 1e-12, 1.0);
}

void ExperimentConfig::validate() const {
  if (n < 2 || n > 100000000) throw config_error("n out of range [2, 1e8]");
  if (s < 0 || s > n) throw config_error("s out of range [0, n]");
  if (!(q > 0.0 && q <= 2.0)) throw config_error("q must lie in (0, 2]");
  slab_model().validate();
  if (kind == ExperimentKind::coverage && !(M > 1.0))
    throw config_error("coverage experiments need M > 1");
  if (!(beta > 0.0 && beta < 1.0)) throw config_error("beta must lie in (0, 1)");
  if (replicates < 1 || replicates > 1000000)
    throw config_error("replicates out of range [1, 1e6]");
  if (alpha_rule == AlphaRule::fixed && !(fixed_alpha > 0.0 && fixed_alpha <= 1.0))
    throw config_error("fixed alpha must lie in (0, 1]");
  if (alpha_rule == AlphaRule::oracle && !(oracle_multiplier > 0.0))
    throw config_error("oracle multiplier must be positive");
  if (alpha_rule == AlphaRule::oracle && s == 0)
    throw config_error("oracle alpha rule needs s >= 1");
  if (kind == ExperimentKind::mean_suboptimality) {
    if (signal.kind != SignalKind::zero)
      throw config_error("mean_suboptimality runs at the zero signal");
    if (!(q < 1.0))
      throw config_error("mean_suboptimality needs q < 1");
  }
}

std::vector<std::string> ExperimentConfig::warnings() const {
  std::vector<std::string> out;
  const double l2 = std::log2(static_cast<double>(n));
  if (s > 0 && static_cast<double>(s) < l2 * l2)
    out.push_back("s below log2(n)^2: adaptation guarantees degrade at this scale");
  if (family == SlabFamily::heavy_tail && q <= delta &&
      kind == ExperimentKind::coverage)
    out.push_back("q <= delta: the spread lower bound driving coverage degenerates");
  if (family == SlabFamily::laplace)
    out.push_back(
        "laplace slab: light tails shrink large signals; heavy-tail slabs are "
        "the supported default");
  return out;
}

WilsonInterval wilson_interval(long successes, long trials, double z) {
  WilsonInterval out;
  if (trials <= 0) return out;
  const double nd = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nd;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nd;
  const double centre = p + z2 / (2.0 * nd);
  const double half = z * std::sqrt(p * (1.0 - p) / nd + z2 / (4.0 * nd * nd));
  out.lo = std::max(0.0, (centre - half) / denom);
  out.hi = std::min(1.0, (centre + half) / denom);
  return out;
}

namespace {

struct RunContext {
  const ExperimentConfig* cfg;
  const ConvolvedDensity* g;
  const std::vector<double>* theta0;
  double alpha_n;
};

double pick_alpha(const RunContext& ctx, std::span<const double> xs,
                  ReplicateRecord& rec) {
  switch (ctx.cfg->alpha_rule) {
    case AlphaRule::mmle: {
      const MmleResult fit = fit_alpha(*ctx.g, xs, ctx.alpha_n);
      rec.alpha_hat = fit.alpha_hat;
      return fit.alpha_hat;
    }
    case AlphaRule::fixed:
      rec.alpha_hat = ctx.cfg->fixed_alpha;
      return ctx.cfg->fixed_alpha;
    case AlphaRule::oracle: {
      const double a = ctx.cfg->oracle_alpha();
      rec.alpha_hat = a;
      return a;
    }
  }
  throw config_error("unhandled alpha rule");
}

void run_replicate(const RunContext& ctx, long r, ReplicateRecord& rec) {
  const ExperimentConfig& cfg = *ctx.cfg;
  const std::vector<double>& theta0 = *ctx.theta0;
  rec.replicate = r + 1;
  std::vector<double> xs(theta0.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    xs[i] = theta0[i] + normal_at(cfg.seed, static_cast<std::uint64_t>(r + 1), i,
                                  RngStream::noise);
  const double alpha = pick_alpha(ctx, xs, rec);

  switch (cfg.kind) {
    case ExperimentKind::coverage: {
      const CredibleBall ball = build_moment_ball(*ctx.g, xs, cfg.q, cfg.M, alpha);
      rec.covered = contains(ball, theta0);
      rec.radius = ball.radius;
      break;
    }
    case ExperimentKind::risk: {
      // posterior spread centred at the truth plus the two point losses
      rec.risk_q = chunked_sum(xs.size(), [&](std::size_t i) {
        return coordinate_radius_q(*ctx.g, xs[i], alpha, cfg.q, theta0[i]);
      });
      std::vector<double> med(xs.size()), mean(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        med[i] = posterior_median(*ctx.g, xs[i], alpha);
        mean[i] = posterior_mean(*ctx.g, xs[i], alpha);
      }
      rec.point_risk_median = dq_distance(med, theta0, cfg.q);
      rec.point_risk_mean = dq_distance(mean, theta0, cfg.q);
      break;
    }
    case ExperimentKind::mean_suboptimality: {
      std::vector<double> med(xs.size()), mean(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        med[i] = posterior_median(*ctx.g, xs[i], alpha);
        mean[i] = posterior_mean(*ctx.g, xs[i], alpha);
      }
      rec.point_risk_median = dq_distance(med, theta0, cfg.q);
      rec.point_risk_mean = dq_distance(mean, theta0, cfg.q);
      break;
    }
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.warnings = config.warnings();

  SlabModel slab = config.slab_model();
  const double dn = static_cast<double>(config.n);
  double x_max = std::sqrt(2.0 * std::log(dn)) + 8.0;
  ConvolvedDensity g0(slab, x_max);

  // signal first: adversarial magnitudes sit under t of the alpha in play
  SignalSpec signal = config.signal;
  if (signal.kind == SignalKind::adversarial && !(signal.threshold_t > 0.0)) {
    const double alpha_for_t = config.alpha_rule == AlphaRule::fixed
                                   ? config.fixed_alpha
                                   : config.oracle_alpha();
    signal.threshold_t = t_of(g0, alpha_for_t);
  }
  result.theta0 = generate_signal(signal, config.n, config.s, config.seed);

  double max_theta = 0.0;
  for (double v : result.theta0) max_theta = std::max(max_theta, std::abs(v));
  const ConvolvedDensity* g = &g0;
  std::unique_ptr<ConvolvedDensity> grown;
  if (max_theta + 8.0 > g0.x_max()) {
    grown = std::make_unique<ConvolvedDensity>(slab, max_theta + 10.0);
    g = grown.get();
  }

  result.alpha_n = alpha_n_of(*g, config.n);

  RunContext ctx{&config, g, &result.theta0, result.alpha_n};
  result.records.assign(static_cast<std::size_t>(config.replicates), {});
  const int workers = resolve_worker_count();
  parallel_for(config.replicates, workers, [&](long r) {
    ReplicateRecord& rec = result.records[static_cast<std::size_t>(r)];
    try {
      run_replicate(ctx, r, rec);
    } catch (const numerical_error& e) {
      rec.replicate = r + 1;
      rec.failed = true;
      rec.failure = e.what();
    }
  });

  // aggregates
  long covered = 0, cover_total = 0;
  KahanSum radius, diam, ahat, risk, prm, prmean;
  long n_radius = 0, n_ahat = 0, n_risk = 0, n_prm = 0, n_prmean = 0;
  for (const auto& rec : result.records) {
    if (rec.failed) {
      ++result.failures;
      continue;
    }
    ++result.completed;
    if (rec.covered) {
      ++cover_total;
      if (*rec.covered) ++covered;
    }
    if (rec.radius) {
      radius.add(*rec.radius);
      const double quasi = config.q > 1.0 ? std::pow(2.0, config.q - 1.0) : 1.0;
      diam.add(2.0 * quasi * *rec.radius);
      ++n_radius;
    }
    if (rec.alpha_hat) {
      ahat.add(*rec.alpha_hat);
      ++n_ahat;
    }
    if (rec.risk_q) {
      risk.add(*rec.risk_q);
      ++n_risk;
    }
    if (rec.point_risk_median) {
      prm.add(*rec.point_risk_median);
      ++n_prm;
    }
    if (rec.point_risk_mean) {
      prmean.add(*rec.point_risk_mean);
      ++n_prmean;
    }
  }
  result.coverage_rate =
      cover_total > 0 ? static_cast<double>(covered) / cover_total : 0.0;
  result.coverage_ci = wilson_interval(covered, cover_total, 1.96);
  auto mean_or_zero = [](const KahanSum& acc, long count) {
    return count > 0 ? acc.value() / static_cast<double>(count) : 0.0;
  };
  result.mean_radius = mean_or_zero(radius, n_radius);
  result.mean_diameter_bound = mean_or_zero(diam, n_radius);
  result.mean_alpha_hat = mean_or_zero(ahat, n_ahat);
  result.mean_risk_q = mean_or_zero(risk, n_risk);
  result.mean_point_risk_median = mean_or_zero(prm, n_prm);
  result.mean_point_risk_mean = mean_or_zero(prmean, n_prmean);
  return result;
}

}  // namespace ebseq
