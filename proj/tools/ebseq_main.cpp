#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ebseq/credible.hpp"
#include "ebseq/errors.hpp"
#include "ebseq/io.hpp"
#include "ebseq/mmle.hpp"
#include "ebseq/posterior.hpp"
#include "ebseq/reduce.hpp"
#include "ebseq/simulate.hpp"
#include "ebseq/sparsity.hpp"
#include "ebseq/thresholds.hpp"
#include "ebseq/version.hpp"

namespace {

using namespace ebseq;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw parse_error("short write: " + path);
}

void write_manifest(const std::string& out_path, const std::string& command,
                    std::uint64_t seed, double wall_seconds) {
  write_text(out_path + ".manifest.json",
             run_manifest_json(command, seed, resolve_worker_count(), wall_seconds));
}

struct SlabArgs {
  std::string family = "heavytail";
  double delta = 1.0;
  double scale = 1.0;
  SlabModel model() const {
    SlabModel slab;
    slab.family = parse_family(family);
    slab.delta = delta;
    slab.scale = scale;
    slab.validate();
    return slab;
  }
};

void add_slab_options(CLI::App* cmd, SlabArgs& args) {
  cmd->add_option("--family", args.family, "slab family: heavytail|cauchy|laplace");
  cmd->add_option("--delta", args.delta, "heavytail tail exponent in (0,2)");
  cmd->add_option("--scale", args.scale, "laplace scale");
}

int cmd_fit(const std::string& data_path, const SlabArgs& slab_args, double q,
            double M, const std::string& out_path,
            const std::string& theta_out) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> xs = read_column(data_path);
  if (xs.size() < 2) throw config_error("fit needs at least 2 observations");

  const SlabModel slab = slab_args.model();
  double max_abs = 0.0;
  for (double v : xs) max_abs = std::max(max_abs, std::abs(v));
  const double x_max =
      std::max(std::sqrt(2.0 * std::log(static_cast<double>(xs.size()))) + 8.0,
               max_abs + 2.0);
  const ConvolvedDensity g(slab, x_max);

  const MmleResult fit = fit_alpha(g, xs);
  const ThresholdTriple thr = thresholds_of(g, fit.alpha_hat);
  std::vector<double> medians;
  const double spread = total_radius_q(g, xs, fit.alpha_hat, q, &medians);

  std::ostringstream report;
  report << "tool=ebseq\n";
  report << "version=" << version << "\n";
  report << "command=fit\n";
  report << "slab=" << slab.describe() << "\n";
  report << "n=" << xs.size() << "\n";
  report << "q=" << format_double(q) << "\n";
  report << "alpha_n=" << format_double(fit.alpha_n) << "\n";
  report << "alpha_hat=" << format_double(fit.alpha_hat) << "\n";
  report << "at_lower_boundary=" << (fit.at_lower_boundary ? 1 : 0) << "\n";
  report << "at_upper_boundary=" << (fit.at_upper_boundary ? 1 : 0) << "\n";
  report << "iterations=" << fit.iterations << "\n";
  report << "score_at_solution=" << format_double(fit.score_at_solution) << "\n";
  report << "zeta=" << format_double(thr.zeta) << "\n";
  report << "tau=" << format_double(thr.tau) << "\n";
  report << "t=" << format_double(thr.t) << "\n";
  report << "M=" << format_double(M) << "\n";
  report << "spread=" << format_double(spread) << "\n";
  report << "radius=" << format_double(M * spread) << "\n";
  const double quasi = q > 1.0 ? std::pow(2.0, q - 1.0) : 1.0;
  report << "diameter_bound=" << format_double(2.0 * quasi * M * spread) << "\n";

  if (!theta_out.empty()) write_column(theta_out, medians);
  if (out_path.empty()) {
    std::cout << report.str();
  } else {
    write_text(out_path, report.str());
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    write_manifest(out_path, "fit", 0, wall);
  }
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& summary_path, bool have_seed,
                 std::uint64_t seed_override) {
  const auto start = std::chrono::steady_clock::now();
  std::ifstream in(config_path);
  if (!in) throw parse_error("cannot open config: " + config_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  ExperimentConfig cfg = parse_experiment_config(buffer.str());
  if (have_seed) cfg.seed = seed_override;

  const ExperimentResult result = run_experiment(cfg);
  const std::string csv = experiment_csv(result);
  const std::string summary = experiment_summary(result);

  if (out_path.empty()) {
    std::cout << csv;
  } else {
    write_text(out_path, csv);
  }
  if (summary_path.empty()) {
    if (!out_path.empty()) std::cout << summary;
  } else {
    write_text(summary_path, summary);
  }
  if (!out_path.empty()) {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    write_manifest(out_path, "simulate", cfg.seed, wall);
  }
  return 0;
}

int cmd_check_eb(const std::string& data_path, long s, const EbConstants& c,
                 const std::string& floor_rule) {
  const std::vector<double> theta = read_column(data_path);
  EbFloor floor = EbFloor::log2_squared;
  if (floor_rule == "one")
    floor = EbFloor::one;
  else if (floor_rule != "log2sq")
    throw config_error("--floor must be log2sq or one");
  const EbReport report = check_eb(theta, s, c, floor);
  std::cout << "satisfied=" << (report.satisfied ? 1 : 0) << "\n";
  std::cout << "smallest_ell=" << report.smallest_ell << "\n";
  std::cout << "effective_sparsity=" << report.effective_sparsity << "\n";
  std::cout << "ell_floor=" << report.ell_floor << "\n";
  std::cout << "scanned_max=" << report.scanned_max << "\n";
  std::cout << "nonzero_count=" << report.nonzero_count << "\n";
  std::cout << "threshold=" << format_double(report.threshold) << "\n";
  std::cout << "large_count=" << report.large_count << "\n";
  std::cout << "small_energy=" << format_double(report.small_energy) << "\n";
  std::cout << "small_energy_budget=" << format_double(report.small_energy_budget)
            << "\n";
  // exit 0 satisfied, 1 not satisfied -- distinct from the error exits 2/3
  return report.satisfied ? 0 : 1;
}

int cmd_thresholds(const SlabArgs& slab_args, double alpha_min, double alpha_max,
                   int points, const std::string& out_path) {
  if (!(alpha_min > 0.0 && alpha_min <= alpha_max && alpha_max <= 1.0))
    throw config_error("need 0 < alpha-min <= alpha-max <= 1");
  if (points < 1 || points > 100000)
    throw config_error("points out of range [1, 1e5]");
  const SlabModel slab = slab_args.model();
  const double span = std::log(alpha_max / alpha_min);
  const double x_max = std::sqrt(2.0 * std::log(1.0 / alpha_min)) + 12.0;
  const ConvolvedDensity g(slab, x_max);
  std::ostringstream out;
  out << "alpha,zeta,tau,t\r\n";
  for (int k = 0; k < points; ++k) {
    const double frac = points == 1 ? 0.0
                                    : static_cast<double>(k) /
                                          static_cast<double>(points - 1);
    const double alpha = alpha_min * std::exp(span * frac);
    const ThresholdTriple thr = thresholds_of(g, alpha);
    out << format_double(alpha) << ',' << format_double(thr.zeta) << ','
        << format_double(thr.tau) << ',' << format_double(thr.t) << "\r\n";
  }
  if (out_path.empty())
    std::cout << out.str();
  else
    write_text(out_path, out.str());
  return 0;
}

int cmd_gtable(const SlabArgs& slab_args, double x_max, double step,
               const std::string& out_path) {
  if (!(step > 0.0 && x_max >= step && x_max <= 1000.0))
    throw config_error("need 0 < step <= x-max <= 1000");
  const SlabModel slab = slab_args.model();
  const ConvolvedDensity g(slab, std::max(12.0, x_max + 1.0));
  std::ostringstream out;
  out << "x,g,log_ratio\r\n";
  for (double x = 0.0; x <= x_max + 1e-12; x += step)
    out << format_double(x) << ',' << format_double(g(x)) << ','
        << format_double(g.log_ratio(x)) << "\r\n";
  if (out_path.empty())
    std::cout << out.str();
  else
    write_text(out_path, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"empirical-Bayes inference for sparse Gaussian sequences"};
  app.set_version_flag("--version", std::string("ebseq ") + version);
  app.require_subcommand(1);

  // fit
  auto* fit = app.add_subcommand("fit", "fit the mixing weight and report thresholds");
  std::string fit_data;
  SlabArgs fit_slab;
  double fit_q = 2.0, fit_M = 20.0;
  std::string fit_out, fit_theta_out;
  fit->add_option("data", fit_data, "one observation per line")->required();
  add_slab_options(fit, fit_slab);
  fit->add_option("--q", fit_q, "distance exponent in (0,2]");
  fit->add_option("--M", fit_M, "moment-ball multiplier");
  fit->add_option("--out", fit_out, "write the report here instead of stdout");
  fit->add_option("--theta-out", fit_theta_out, "write posterior medians here");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run a replicated experiment");
  std::string sim_config, sim_out, sim_summary;
  std::uint64_t sim_seed = 0;
  sim->add_option("config", sim_config, "experiment config (JSON)")->required();
  sim->add_option("--out", sim_out, "replicate CSV path (default stdout)");
  sim->add_option("--summary-out", sim_summary, "summary path (default stdout)");
  auto* seed_opt = sim->add_option("--seed", sim_seed, "override the config seed");

  // check-eb
  auto* eb = app.add_subcommand("check-eb", "excessive-bias scan of a signal");
  std::string eb_data, eb_floor = "log2sq";
  long eb_s = 0;
  EbConstants eb_const;
  eb->add_option("data", eb_data, "one coordinate per line")->required();
  eb->add_option("--s", eb_s, "sparsity bound to scan up to")->required();
  eb->add_option("--q", eb_const.q, "energy exponent in (0,2]");
  eb->add_option("--A", eb_const.A, "threshold constant, > 1");
  eb->add_option("--Cq", eb_const.C_q, "count slack, > 0");
  eb->add_option("--Dq", eb_const.D_q, "energy budget constant");
  eb->add_option("--floor", eb_floor, "scan floor: log2sq (default) or one");

  // thresholds
  auto* thr = app.add_subcommand("thresholds", "zeta/tau/t table over alpha");
  SlabArgs thr_slab;
  double thr_lo = 1e-6, thr_hi = 0.5;
  int thr_points = 25;
  std::string thr_out;
  add_slab_options(thr, thr_slab);
  thr->add_option("--alpha-min", thr_lo, "smallest alpha (geometric grid)");
  thr->add_option("--alpha-max", thr_hi, "largest alpha");
  thr->add_option("--points", thr_points, "grid size");
  thr->add_option("--out", thr_out, "CSV path (default stdout)");

  // gtable
  auto* gt = app.add_subcommand("gtable", "marginal density table");
  SlabArgs gt_slab;
  double gt_xmax = 10.0, gt_step = 0.1;
  std::string gt_out;
  add_slab_options(gt, gt_slab);
  gt->add_option("--x-max", gt_xmax, "table endpoint");
  gt->add_option("--step", gt_step, "grid step");
  gt->add_option("--out", gt_out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
    if (fit->parsed())
      return cmd_fit(fit_data, fit_slab, fit_q, fit_M, fit_out, fit_theta_out);
    if (sim->parsed())
      return cmd_simulate(sim_config, sim_out, sim_summary,
                          seed_opt->count() > 0, sim_seed);
    if (eb->parsed()) return cmd_check_eb(eb_data, eb_s, eb_const, eb_floor);
    if (thr->parsed())
      return cmd_thresholds(thr_slab, thr_lo, thr_hi, thr_points, thr_out);
    if (gt->parsed()) return cmd_gtable(gt_slab, gt_xmax, gt_step, gt_out);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const parse_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    // 1 is reserved for condition-not-satisfied (check-eb)
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
