#include "ebseq/thresholds.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ebseq/errors.hpp"
#include "ebseq/normal.hpp"
#include "ebseq/posterior.hpp"
#include "ebseq/quadrature.hpp"
#include "ebseq/tilted.hpp"

namespace ebseq {

namespace {

void check_open_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw config_error("alpha must lie in (0, 1]");
}

// Root of the increasing function f on [0, hi_guess], growing the bracket
// geometrically if f(hi) < 0 still.
template <class F>
double solve_increasing(F&& f, double hi_guess, const char* what) {
  double lo = 0.0, hi = hi_guess;
  if (f(lo) >= 0.0) return lo;
  int grow = 0;
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (++grow > 10)
      throw numerical_error(std::string("no sign change bracketing ") + what);
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
    if (hi - lo < 1e-13 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

// log-ratio root: L(x) = target for x >= 0.
double log_ratio_root(const ConvolvedDensity& g, double target, const char* what) {
  const double guess = std::sqrt(2.0 * std::max(target, 1.0)) + 10.0;
  return solve_increasing([&](double x) { return g.log_ratio(x) - target; },
                          guess, what);
}

double t_zero_gap(const ConvolvedDensity& g, double alpha, double x) {
  const double a = slab_weight(g, x, alpha);
  if (a <= 0.5) return a * 0.5 - 0.5;  // Gamma_x(0) <= 1/2 for x >= 0
  TiltedDistribution td(g, x);
  return a * (1.0 - td.cdf(0.0)) - 0.5;
}

// Composite Gauss-Legendre of f(x) phi(x - mu) over [mu - R, mu + R] with one
// refinement step; relative tolerance 1e-8 against the finer level.
template <class F>
double gaussian_expectation(const ConvolvedDensity& g, double mu, F&& f,
                            const char* what) {
  const double R = g.slab().quadrature.truncation_radius;
  double value = 0.0, prev = 0.0;
  double achieved = std::numeric_limits<double>::infinity();
  for (int level = 0; level < 4; ++level) {
    const double width = 1.0 / static_cast<double>(1 << level);
    const auto edges = panel_edges(mu - R, mu + R, width, {0.0});
    const auto& rule = GaussLegendre::of(32);
    value = integrate_panels(
        [&](double x) { return f(x) * normal_pdf(x - mu); }, edges, rule);
    if (level > 0) {
      const double scale = std::max({std::abs(value), std::abs(prev), 1e-300});
      achieved = std::abs(value - prev) / scale;
      if (achieved <= 1e-8) return value;
    }
    prev = value;
  }
  std::ostringstream msg;
  msg << what << " quadrature failed to reach 1e-8 (achieved " << achieved << ")";
  throw numerical_error(msg.str(), achieved);
}

}  // namespace

double zeta_of(const ConvolvedDensity& g, double alpha) {
  check_open_alpha(alpha);
  // B(zeta) = 1/alpha  <=>  log-ratio = log(1 + 1/alpha)
  const double zeta = log_ratio_root(g, std::log1p(1.0 / alpha), "zeta");
  return zeta;
}

double alpha0_of(const ConvolvedDensity& g) {
  return 1.0 / (1.0 + std::exp(g.log_ratio(1.0)));
}

double tau_of(const ConvolvedDensity& g, double alpha) {
  check_open_alpha(alpha);
  const double a = std::min(alpha, alpha0_of(g));
  // a(tau) = 1/2  <=>  log-ratio = log((1-a)/a)
  return log_ratio_root(g, std::log((1.0 - a) / a), "tau");
}

double t_of(const ConvolvedDensity& g, double alpha) {
  check_open_alpha(alpha);
  const double zeta = zeta_of(g, alpha);
  double hi = zeta + 1.0;
  int grow = 0;
  while (t_zero_gap(g, alpha, hi) < 0.0) {
    hi += 2.0;
    if (++grow > 10) throw numerical_error("no sign change bracketing t");
  }
  double lo = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (t_zero_gap(g, alpha, mid) < 0.0 ? lo : hi) = mid;
    if (hi - lo < 1e-13 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

ThresholdTriple thresholds_of(const ConvolvedDensity& g, double alpha) {
  ThresholdTriple out;
  out.alpha = alpha;
  out.zeta = zeta_of(g, alpha);
  out.tau = tau_of(g, alpha);
  out.t = t_of(g, alpha);
  return out;
}

double invert_t(const ConvolvedDensity& g, double target_t) {
  if (!(target_t > 0.0) || !std::isfinite(target_t))
    throw config_error("invert_t target must be positive and finite");
  // t is decreasing in alpha; bracket [lo, hi] with t(lo) >= target >= t(hi).
  double hi = 1.0;
  double lo = 0.25;
  int grow = 0;
  while (t_of(g, lo) < target_t) {
    lo *= 0.25;
    if (++grow > 200) throw numerical_error("invert_t bracket failed");
    if (lo < 1e-300) throw numerical_error("invert_t target unreachable");
  }
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double t_mid = t_of(g, mid);
    if (std::abs(t_mid - target_t) < 1e-12) return mid;
    (t_mid > target_t ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double alpha_n_of(const ConvolvedDensity& g, long n) {
  if (n < 2) throw config_error("alpha_n needs n >= 2");
  return invert_t(g, std::sqrt(2.0 * std::log(static_cast<double>(n))));
}

double m1_of(const ConvolvedDensity& g, double mu, double alpha) {
  check_open_alpha(alpha);
  return gaussian_expectation(
      g, mu, [&](double x) { return g.score_b_alpha(x, alpha); }, "m1");
}

double m2_of(const ConvolvedDensity& g, double mu, double alpha) {
  check_open_alpha(alpha);
  return gaussian_expectation(
      g, mu,
      [&](double x) {
        const double b = g.score_b_alpha(x, alpha);
        return b * b;
      },
      "m2");
}

double m_tilde_of(const ConvolvedDensity& g, double alpha) {
  return -m1_of(g, 0.0, alpha);
}

MomentDiagnostics moments_of(const ConvolvedDensity& g, double alpha,
                             std::span<const double> mus) {
  MomentDiagnostics out;
  out.alpha = alpha;
  out.m_tilde = m_tilde_of(g, alpha);
  out.mu.assign(mus.begin(), mus.end());
  out.m1.reserve(mus.size());
  out.m2.reserve(mus.size());
  for (double mu : mus) {
    out.m1.push_back(m1_of(g, mu, alpha));
    out.m2.push_back(m2_of(g, mu, alpha));
  }
  return out;
}

double alpha_tilde_of(const ConvolvedDensity& g, long n, double s, double d) {
  if (n < 2 || !(s > 0) || s > static_cast<double>(n))
    throw config_error("alpha_tilde needs n >= 2 and 0 < s <= n");
  if (!(d > 0)) throw config_error("alpha_tilde slack d must be positive");
  const double target = s / static_cast<double>(n);
  // d * alpha * m_tilde(alpha) is increasing in alpha; bisect on [tiny, 1].
  double lo = 1e-12, hi = 1.0;
  auto f = [&](double a) { return d * a * m_tilde_of(g, a) - target; };
  if (f(hi) < 0.0) return 1.0;
  if (f(lo) > 0.0) return lo;
  for (int iter = 0; iter < 100; ++iter) {
    const double mid = std::sqrt(lo * hi);  // geometric: alpha spans decades
    (f(mid) < 0.0 ? lo : hi) = mid;
    if (hi / lo < 1.0 + 1e-10) break;
  }
  return std::sqrt(lo * hi);
}

}  // namespace ebseq
